#include "sasaki/geometry.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace sasaki {

namespace {

Eigen::MatrixXd to_matrix(const RealTensor& t) {
    const int n = t.dim();
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = t(i, j);
    return m;
}

JetTensor jet_matmul(const JetTensor& a, const JetTensor& b) {
    const int n = a.dim();
    const int order = std::min(a.flat(0).order(), b.flat(0).order());
    JetTensor out(n, 2, Jet(a.flat(0).dim(), order));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Jet acc(a.flat(0).dim(), order);
            for (int k = 0; k < n; ++k) acc += a(i, k) * b(k, j);
            out(i, j) = std::move(acc);
        }
    return out;
}

int jet_order(const JetTensor& t) { return t.flat(0).order(); }
int jet_dim(const JetTensor& t) { return t.flat(0).dim(); }

}  // namespace

JetTensor jet_inverse(const JetTensor& a) {
    const int n = a.dim();
    const int vars = jet_dim(a);
    const int order = jet_order(a);
    const Eigen::MatrixXd a0 = to_matrix(values(a));
    const double det = a0.determinant();
    double scale = 1.0;
    for (int i = 0; i < n; ++i) scale *= std::max(a0.row(i).cwiseAbs().maxCoeff(), 1e-300);
    if (!std::isfinite(det) || std::abs(det) <= 1e-13 * scale) throw SingularMetricError(det);
    const Eigen::MatrixXd a0inv = a0.inverse();

    JetTensor base(n, 2, Jet(vars, order));
    JetTensor step(n, 2, Jet(vars, order));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) base(i, j) = Jet::constant(vars, order, a0inv(i, j));
    // step = -a0^{-1} (a - a0), nilpotent up to the jet order.
    JetTensor nil = a;
    for (auto& e : nil.data()) e.coeffs()[0] = 0.0;
    step = jet_matmul(base, nil);
    for (auto& e : step.data()) e *= -1.0;

    JetTensor sum = base;
    JetTensor term = base;
    for (int k = 1; k <= order; ++k) {
        term = jet_matmul(step, term);
        for (std::size_t f = 0; f < sum.size(); ++f) sum.flat(f) += term.flat(f);
    }
    return sum;
}

GeometryJets geometry_from_metric(const JetTensor& g, GeometryLevel level) {
    const int n = g.dim();
    const int vars = jet_dim(g);
    const int order = jet_order(g);
    const int need = static_cast<int>(level);
    if (order < need) throw std::invalid_argument("geometry_from_metric: metric jets of order " + std::to_string(need) + " required");

    GeometryJets geo;
    geo.dim = n;
    geo.g = g;
    geo.g_inv = jet_inverse(g);

    // dg(l, i, j) = d_l g_ij
    JetTensor dg(n, 3, Jet(vars, order - 1));
    for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) dg(l, i, j) = g(i, j).partial(l);

    geo.gamma = JetTensor(n, 3, Jet(vars, order - 1));
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                Jet acc(vars, order - 1);
                for (int l = 0; l < n; ++l) acc += geo.g_inv(k, l) * (dg(i, j, l) + dg(j, i, l) - dg(l, i, j));
                acc *= 0.5;
                geo.gamma(k, i, j) = acc;
                geo.gamma(k, j, i) = std::move(acc);
            }
    if (level == GeometryLevel::Connection) return geo;

    // dgam(i, l, j, k) = d_i Gamma^l_jk
    JetTensor dgam(n, 4, Jet(vars, order - 2));
    for (int i = 0; i < n; ++i)
        for (std::size_t f = 0; f < geo.gamma.size(); ++f) {
            auto idx = geo.gamma.unflatten(f);
            dgam(i, idx[0], idx[1], idx[2]) = geo.gamma.flat(f).partial(i);
        }

    geo.riemann = JetTensor(n, 4, Jet(vars, order - 2));
    for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    Jet acc = dgam(i, l, j, k) - dgam(j, l, i, k);
                    for (int m = 0; m < n; ++m)
                        acc += geo.gamma(l, i, m) * geo.gamma(m, j, k) - geo.gamma(l, j, m) * geo.gamma(m, i, k);
                    geo.riemann(l, k, j, i) = -acc;
                    geo.riemann(l, k, i, j) = std::move(acc);
                }
    if (level == GeometryLevel::Curvature) return geo;

    geo.nabla_riemann = covariant_derivative(geo.riemann, geo.gamma);
    return geo;
}

JetTensor covariant_derivative(const JetTensor& t, const JetTensor& gamma) {
    const int n = t.dim();
    const int vars = jet_dim(t);
    const int out_order = std::min(jet_order(t) - 1, jet_order(gamma));
    if (out_order < 0) throw std::invalid_argument("covariant_derivative: tensor jets carry no derivatives");
    const int rank = t.rank();
    const int lower = rank - 1;

    // Partials of every component, computed once.
    std::vector<JetVec> partials(static_cast<std::size_t>(n));
    for (int m = 0; m < n; ++m) {
        auto& pm = partials[static_cast<std::size_t>(m)];
        pm.reserve(t.size());
        for (std::size_t f = 0; f < t.size(); ++f) pm.push_back(t.flat(f).partial(m));
    }

    JetTensor out(n, rank + 1, Jet(vars, out_order));
    std::vector<int> src(static_cast<std::size_t>(rank));
    for (std::size_t f = 0; f < out.size(); ++f) {
        const auto idx = out.unflatten(f);
        const int k = idx[0];
        const int m = idx[1];
        src[0] = k;
        for (int s = 0; s < lower; ++s) src[static_cast<std::size_t>(1 + s)] = idx[static_cast<std::size_t>(2 + s)];

        Jet acc = partials[static_cast<std::size_t>(m)][t.flat_index(src)].truncated(out_order);
        for (int a = 0; a < n; ++a) {
            src[0] = a;
            acc += gamma(k, m, a) * t.at(src);
        }
        src[0] = k;
        for (int s = 0; s < lower; ++s) {
            const auto slot = static_cast<std::size_t>(1 + s);
            const int orig = src[slot];
            for (int a = 0; a < n; ++a) {
                src[slot] = a;
                acc -= gamma(a, m, orig) * t.at(src);
            }
            src[slot] = orig;
        }
        out.flat(f) = std::move(acc);
    }
    return out;
}

JetTensor covariant_derivative_lower2(const JetTensor& t, const JetTensor& gamma) {
    const int n = t.dim();
    const int vars = jet_dim(t);
    const int out_order = std::min(jet_order(t) - 1, jet_order(gamma));
    JetTensor out(n, 3, Jet(vars, out_order));
    for (int m = 0; m < n; ++m)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Jet acc = t(i, j).partial(m).truncated(out_order);
                for (int a = 0; a < n; ++a) acc -= gamma(a, m, i) * t(a, j) + gamma(a, m, j) * t(i, a);
                out(m, i, j) = std::move(acc);
            }
    return out;
}

BaseJets base_jets(const ChartManifold& m, std::span<const double> p, int metric_order, GeometryLevel level) {
    BaseJets b;
    b.geo = geometry_from_metric(m.metric_jets(p, metric_order), level);
    b.phi = m.structure_jets(p, metric_order);
    return b;
}

GeometryAtPoint to_point_values(const GeometryJets& geo, std::span<const double> p) {
    GeometryAtPoint out;
    out.p.assign(p.begin(), p.end());
    out.g = values(geo.g);
    out.g_inv = values(geo.g_inv);
    out.det_g = to_matrix(out.g).determinant();
    const int n = geo.dim;
    if (!geo.gamma.empty()) {
        out.gamma = values(geo.gamma);
        if (jet_order(geo.gamma) >= 1) {
            out.dgamma = RealTensor(n, 4);
            for (int l = 0; l < n; ++l)
                for (std::size_t f = 0; f < geo.gamma.size(); ++f) {
                    auto idx = geo.gamma.unflatten(f);
                    out.dgamma(l, idx[0], idx[1], idx[2]) = geo.gamma.flat(f).partial(l).value();
                }
        }
    }
    if (!geo.riemann.empty()) out.curvature = values(geo.riemann);
    if (!geo.nabla_riemann.empty()) out.nabla_R = values(geo.nabla_riemann);
    return out;
}

GeometryAtPoint geometry_at(const ChartManifold& m, std::span<const double> p, GeometryLevel level) {
    const int order = std::min(kMaxJetOrder, static_cast<int>(level) + 1);
    BaseJets b = base_jets(m, p, order, level);
    GeometryAtPoint out = to_point_values(b.geo, p);
    out.phi = values(b.phi);
    return out;
}

GeometryAtPoint christoffel(const ChartManifold& m, std::span<const double> p) {
    return geometry_at(m, p, GeometryLevel::Connection);
}

GeometryAtPoint curvature(const ChartManifold& m, std::span<const double> p) {
    return geometry_at(m, p, GeometryLevel::Curvature);
}

GeometryAtPoint curvature_cov_deriv(const ChartManifold& m, std::span<const double> p) {
    return geometry_at(m, p, GeometryLevel::CurvatureDerivative);
}

namespace {

struct HessianData {
    Vec df;
    RealTensor hess;
    RealTensor g_inv;
};

HessianData hessian(const ChartManifold& m, const Expr& f, std::span<const double> p) {
    const int n = m.dim();
    GeometryJets geo = geometry_from_metric(m.metric_jets(p, 1), GeometryLevel::Connection);
    const Jet fj = f.eval_jet(p, 2, m.param_values());
    HessianData h;
    h.df.resize(static_cast<std::size_t>(n));
    h.hess = RealTensor(n, 2);
    h.g_inv = values(geo.g_inv);
    for (int i = 0; i < n; ++i) h.df[static_cast<std::size_t>(i)] = fj.partial(i).value();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double v = fj.partial(i).partial(j).value();
            for (int k = 0; k < n; ++k) v -= geo.gamma(k, i, j).value() * h.df[static_cast<std::size_t>(k)];
            h.hess(i, j) = v;
        }
    return h;
}

}  // namespace

double trace_hessian(const ChartManifold& m, const Expr& f, std::span<const double> p) {
    const HessianData h = hessian(m, f, p);
    double tr = 0.0;
    for (int i = 0; i < m.dim(); ++i)
        for (int j = 0; j < m.dim(); ++j) tr += h.g_inv(i, j) * h.hess(i, j);
    return tr;
}

GradLaplace grad_and_laplace(const ChartManifold& m, const Expr& f, std::span<const double> p, LaplacianSign sign) {
    const HessianData h = hessian(m, f, p);
    const int n = m.dim();
    GradLaplace out;
    out.grad.assign(static_cast<std::size_t>(n), 0.0);
    double tr = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            out.grad[static_cast<std::size_t>(i)] += h.g_inv(i, j) * h.df[static_cast<std::size_t>(j)];
            tr += h.g_inv(i, j) * h.hess(i, j);
        }
    out.laplacian = sign == LaplacianSign::PlusTrace ? tr : -tr;
    return out;
}

Vec curvature_apply(const RealTensor& riemann, const Vec& x, const Vec& y, const Vec& z) {
    const int n = riemann.dim();
    Vec out(static_cast<std::size_t>(n), 0.0);
    for (int l = 0; l < n; ++l) {
        double acc = 0.0;
        for (int k = 0; k < n; ++k) {
            if (z[static_cast<std::size_t>(k)] == 0.0) continue;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    acc += riemann(l, k, i, j) * z[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(i)] *
                           y[static_cast<std::size_t>(j)];
        }
        out[static_cast<std::size_t>(l)] = acc;
    }
    return out;
}

Vec nabla_curvature_apply(const RealTensor& nabla_riemann, const Vec& w, const Vec& x, const Vec& y, const Vec& z) {
    const int n = nabla_riemann.dim();
    Vec out(static_cast<std::size_t>(n), 0.0);
    for (int l = 0; l < n; ++l) {
        double acc = 0.0;
        for (int m = 0; m < n; ++m) {
            if (w[static_cast<std::size_t>(m)] == 0.0) continue;
            for (int k = 0; k < n; ++k)
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        acc += nabla_riemann(l, m, k, i, j) * w[static_cast<std::size_t>(m)] * z[static_cast<std::size_t>(k)] *
                               x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(j)];
        }
        out[static_cast<std::size_t>(l)] = acc;
    }
    return out;
}

Vec apply_matrix(const RealTensor& a, const Vec& x) {
    const int n = a.dim();
    Vec out(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(i)] += a(i, j) * x[static_cast<std::size_t>(j)];
    return out;
}

double inner(const RealTensor& g, const Vec& a, const Vec& b) {
    const int n = g.dim();
    double s = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s += g(i, j) * a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)];
    return s;
}

double sup_norm(const Vec& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double sup_norm(const RealTensor& t) { return sup_norm(t.data()); }

Vec add(const Vec& a, const Vec& b) {
    Vec out = a;
    axpy(out, 1.0, b);
    return out;
}

Vec sub(const Vec& a, const Vec& b) {
    Vec out = a;
    axpy(out, -1.0, b);
    return out;
}

Vec scale(double s, const Vec& a) {
    Vec out = a;
    for (double& x : out) x *= s;
    return out;
}

void axpy(Vec& a, double s, const Vec& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += s * b[i];
}

}  // namespace sasaki
