#include "sasaki/variational.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sasaki/builtins.hpp"

namespace sasaki {

namespace {

std::size_t u(int i) { return static_cast<std::size_t>(i); }

JetTensor as_tensor(const JetVec& v) {
    JetTensor t(static_cast<int>(v.size()), 1);
    for (std::size_t k = 0; k < v.size(); ++k) t.flat(k) = v[k];
    return t;
}

/// -g^{ij} T(k, i, j) for a second covariant derivative T.
JetTensor minus_trace(const JetTensor& t, const JetTensor& g_inv) {
    const int n = t.dim();
    const int order = std::min(t.flat(0).order(), g_inv.flat(0).order());
    JetTensor out(n, 1, Jet(t.flat(0).dim(), order));
    for (int k = 0; k < n; ++k) {
        Jet acc(t.flat(0).dim(), order);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) acc -= g_inv(i, j) * t(k, i, j);
        out(k) = std::move(acc);
    }
    return out;
}

/// S^l = g^{ij} R^l_{j a b} (phi xi)^a (nabla_i xi)^b
JetTensor s_jets(const GeometryJets& geo, const JetTensor& phi, const JetTensor& xi, const JetTensor& nxi) {
    const int n = geo.dim;
    const int vars = xi.flat(0).dim();
    const int order = std::min({geo.riemann.flat(0).order(), nxi.flat(0).order(), geo.g_inv.flat(0).order()});
    JetVec phixi;
    for (int a = 0; a < n; ++a) {
        Jet s(vars, order);
        for (int c = 0; c < n; ++c) s += phi(a, c) * xi(c);
        phixi.push_back(std::move(s));
    }
    // A^l_{j b} = R^l_{j a b} (phi xi)^a, then contract with g^{ij} nabla_i xi^b.
    JetTensor out(n, 1, Jet(vars, order));
    for (int l = 0; l < n; ++l) {
        Jet acc(vars, order);
        for (int j = 0; j < n; ++j)
            for (int b = 0; b < n; ++b) {
                Jet a(vars, order);
                for (int c = 0; c < n; ++c) a += geo.riemann(l, j, c, b) * phixi[u(c)];
                Jet contraction(vars, order);
                for (int i = 0; i < n; ++i) contraction += geo.g_inv(i, j) * nxi(b, i);
                acc += a * contraction;
            }
        out(l) = std::move(acc);
    }
    return out;
}

struct OperatorJets {
    BaseJets base;
    JetTensor xi, nxi, n2xi;
    JetTensor lap, nlap, n2lap;
    JetTensor S, nS, n2S;
};

/// Jet budget: metric and xi of order 4 leave every operator of the
/// bitension with at least an exact value.
OperatorJets operator_jets(const ChartManifold& m, const VectorFieldSpec& xi, std::span<const double> p, bool full) {
    const int order = full ? 4 : 2;
    OperatorJets o;
    o.base = base_jets(m, p, order, full ? GeometryLevel::CurvatureDerivative : GeometryLevel::Curvature);
    const GeometryJets& geo = o.base.geo;
    o.xi = as_tensor(field_jets(m, xi, p, order));
    o.nxi = covariant_derivative(o.xi, geo.gamma);
    o.n2xi = covariant_derivative(o.nxi, geo.gamma);
    o.lap = minus_trace(o.n2xi, geo.g_inv);
    o.S = s_jets(geo, o.base.phi, o.xi, o.nxi);
    if (full) {
        o.nlap = covariant_derivative(o.lap, geo.gamma);
        o.n2lap = covariant_derivative(o.nlap, geo.gamma);
        o.nS = covariant_derivative(o.S, geo.gamma);
        o.n2S = covariant_derivative(o.nS, geo.gamma);
    }
    return o;
}

Vec vec_values(const JetTensor& t) { return values(t).data(); }

Vec column(const RealTensor& t, int i) {
    Vec out(u(t.dim()));
    for (int k = 0; k < t.dim(); ++k) out[u(k)] = t(k, i);
    return out;
}

Vec unit(int n, int i) {
    Vec e(u(n), 0.0);
    e[u(i)] = 1.0;
    return e;
}

}  // namespace

std::vector<RealTensor> covariant_derivs_vector(const ChartManifold& m, const VectorFieldSpec& xi, std::span<const double> p,
                                                int depth) {
    if (depth < 1 || depth > kMaxJetOrder) throw std::invalid_argument("covariant_derivs_vector: depth must be 1..4");
    const BaseJets base = base_jets(m, p, depth, GeometryLevel::Connection);
    JetTensor t = as_tensor(field_jets(m, xi, p, depth));
    std::vector<RealTensor> out;
    for (int d = 1; d <= depth; ++d) {
        t = covariant_derivative(t, base.geo.gamma);
        out.push_back(values(t));
    }
    return out;
}

Vec rough_laplacian(const ChartManifold& m, const VectorFieldSpec& xi, std::span<const double> p, int iterate) {
    if (iterate == 1) return vec_values(operator_jets(m, xi, p, false).lap);
    if (iterate == 2) {
        const OperatorJets o = operator_jets(m, xi, p, true);
        return vec_values(minus_trace(o.n2lap, o.base.geo.g_inv));
    }
    throw std::invalid_argument("rough_laplacian: iterate must be 1 or 2");
}

Vec s_field(const ChartManifold& m, const VectorFieldSpec& xi, std::span<const double> p) {
    return vec_values(operator_jets(m, xi, p, false).S);
}

TensionReport tension_report(const ChartManifold& m, const VectorFieldSpec& xi, std::span<const double> p, double delta1,
                             double delta2) {
    const OperatorJets o = operator_jets(m, xi, p, true);
    const int n = m.dim();
    const RealTensor g_inv = values(o.base.geo.g_inv);
    const RealTensor R = values(o.base.geo.riemann);
    const RealTensor nR = values(o.base.geo.nabla_riemann);
    const RealTensor phi = values(o.base.phi);

    TensionReport r;
    r.at.assign(p.begin(), p.end());
    r.delta1 = delta1;
    r.delta2 = delta2;
    r.xi = vec_values(o.xi);
    r.S = vec_values(o.S);
    r.lap = vec_values(o.lap);
    r.lap2 = vec_values(minus_trace(o.n2lap, o.base.geo.g_inv));
    r.lap_S = vec_values(minus_trace(o.n2S, o.base.geo.g_inv));
    r.nabla_xi = values(o.nxi);
    const RealTensor nS = values(o.nS);
    const RealTensor nlap = values(o.nlap);

    const Vec phixi = apply_matrix(phi, r.xi);
    const Vec philap = apply_matrix(phi, r.lap);
    r.curvature_S = curvature_apply(R, phixi, r.lap, r.S);

    r.h_trace.assign(u(n), 0.0);
    r.trace_term.assign(u(n), 0.0);
    for (int i = 0; i < n; ++i) {
        const Vec ei = unit(n, i);
        const Vec dxi_i = column(r.nabla_xi, i);
        const Vec dS_i = column(nS, i);
        const Vec dlap_i = column(nlap, i);
        for (int j = 0; j < n; ++j) {
            const double gij = g_inv(i, j);
            if (gij == 0.0) continue;
            const Vec ej = unit(n, j);
            Vec h = nabla_curvature_apply(nR, r.S, phixi, dxi_i, ej);
            axpy(h, 1.0, curvature_apply(R, phixi, dxi_i, column(nS, j)));
            axpy(h, -1.0, curvature_apply(R, phixi, curvature_apply(R, ei, r.S, r.xi), ej));
            axpy(h, 1.0, curvature_apply(R, r.S, ei, ej));
            axpy(h, -1.0, curvature_apply(R, phixi, dlap_i, ej));
            axpy(h, -1.0, curvature_apply(R, philap, dxi_i, ej));
            axpy(r.h_trace, gij, h);

            Vec v = nabla_curvature_apply(nR, ei, ej, r.S, r.xi);
            axpy(v, 1.0, curvature_apply(R, ej, dS_i, r.xi));
            axpy(v, 2.0, curvature_apply(R, ej, r.S, dxi_i));
            axpy(r.trace_term, gij, v);
        }
    }

    r.tau = {r.S, scale(-1.0, r.lap)};

    r.tau2.h = r.lap_S;
    axpy(r.tau2.h, 1.0, r.curvature_S);
    axpy(r.tau2.h, -1.0, r.h_trace);
    r.tau2.w = scale(-1.0, r.lap2);
    axpy(r.tau2.w, 1.0, r.trace_term);

    r.sesqui.h = scale(delta1, r.S);
    axpy(r.sesqui.h, delta2, r.lap_S);
    axpy(r.sesqui.h, delta2, r.curvature_S);
    axpy(r.sesqui.h, -delta2, r.h_trace);
    r.sesqui.w = scale(-delta1, r.lap);
    axpy(r.sesqui.w, -delta2, r.lap2);
    axpy(r.sesqui.w, delta2, r.trace_term);
    return r;
}

LiftedVector tension(const ChartManifold& m, const VectorFieldSpec& xi, std::span<const double> p) {
    const OperatorJets o = operator_jets(m, xi, p, false);
    return {vec_values(o.S), scale(-1.0, vec_values(o.lap))};
}

FirstOrderData first_order_data(const ChartManifold& m, const VectorFieldSpec& xi, std::span<const double> p) {
    const OperatorJets o = operator_jets(m, xi, p, false);
    FirstOrderData d;
    d.g = values(o.base.geo.g);
    d.g_inv = values(o.base.geo.g_inv);
    d.phi = values(o.base.phi);
    d.nabla_xi = values(o.nxi);
    const int n = m.dim();
    Eigen::MatrixXd g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = d.g(i, j);
    d.sqrt_abs_det_g = std::sqrt(std::abs(g.determinant()));
    d.tau = {vec_values(o.S), scale(-1.0, vec_values(o.lap))};
    return d;
}

LiftedVector bitension(const ChartManifold& m, const VectorFieldSpec& xi, std::span<const double> p) {
    return tension_report(m, xi, p, 0.0, 1.0).tau2;
}

LiftedVector sesqui_tension(const ChartManifold& m, const VectorFieldSpec& xi, std::span<const double> p, double delta1,
                            double delta2) {
    return tension_report(m, xi, p, delta1, delta2).sesqui;
}

MapTension map_tension_oracle(const ChartManifold& m, const VectorFieldSpec& xi, std::span<const double> p) {
    const int n = m.dim();
    const int N2 = 2 * n;
    constexpr int order = 4;

    // The map x -> (x, xi(x)) in bundle-chart coordinates.
    JetVec Phi;
    for (int i = 0; i < n; ++i) Phi.push_back(Jet::variable(n, order, i, p[u(i)]));
    for (auto& c : field_jets(m, xi, p, order)) Phi.push_back(std::move(c));
    BundlePoint bp{Vec(p.begin(), p.end()), {}};
    for (int k = 0; k < n; ++k) bp.v.push_back(Phi[u(n + k)].value());

    const GeometryJets target = bundle_chart_geometry(m, bp, 3, GeometryLevel::Curvature);
    const Substitution along(Phi, 2);
    JetTensor Gt(N2, 3);  // target Christoffels along the map, order 2 in x
    for (std::size_t f = 0; f < Gt.size(); ++f) Gt.flat(f) = along.apply(target.gamma.flat(f));
    const RealTensor Rt = values(target.riemann);

    const GeometryJets base = geometry_from_metric(m.metric_jets(p, 3), GeometryLevel::Connection);

    JetTensor dPhi(N2, 2);  // only the first n columns are used
    for (int A = 0; A < N2; ++A)
        for (int i = 0; i < n; ++i) dPhi(A, i) = Phi[u(A)].partial(i);

    // tau^A = g^{ij} (d_i d_j Phi^A - Gamma^k_ij d_k Phi^A + Gt^A_BC d_i Phi^B d_j Phi^C)
    JetVec tau(u(N2), Jet(n, 2));
    for (int A = 0; A < N2; ++A) {
        Jet acc(n, 2);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Jet h = dPhi(A, i).partial(j).truncated(2);
                for (int k = 0; k < n; ++k) h -= base.gamma(k, i, j) * dPhi(A, k);
                for (int B = 0; B < N2; ++B)
                    for (int C = 0; C < N2; ++C) h += Gt(A, B, C) * dPhi(B, i) * dPhi(C, j);
                acc += base.g_inv(i, j) * h;
            }
        tau[u(A)] = std::move(acc);
    }

    // Pull-back covariant derivatives of tau.
    JetTensor ntau(N2, 2);
    for (int A = 0; A < N2; ++A)
        for (int i = 0; i < n; ++i) {
            Jet acc = tau[u(A)].partial(i);
            for (int B = 0; B < N2; ++B)
                for (int C = 0; C < N2; ++C) acc += Gt(A, B, C) * dPhi(B, i) * tau[u(C)];
            ntau(A, i) = std::move(acc);
        }
    Vec lap(u(N2), 0.0);
    for (int A = 0; A < N2; ++A) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double h = ntau(A, j).partial(i).value();
                for (int B = 0; B < N2; ++B)
                    for (int C = 0; C < N2; ++C) h += Gt(A, B, C).value() * dPhi(B, i).value() * ntau(C, j).value();
                for (int k = 0; k < n; ++k) h -= base.gamma(k, i, j).value() * ntau(A, k).value();
                acc -= base.g_inv(i, j).value() * h;
            }
        lap[u(A)] = acc;
    }

    const Vec tau0 = values(tau);
    Vec tau2 = lap;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double gij = base.g_inv(i, j).value();
            if (gij == 0.0) continue;
            Vec di(u(N2)), dj(u(N2));
            for (int A = 0; A < N2; ++A) {
                di[u(A)] = dPhi(A, i).value();
                dj[u(A)] = dPhi(A, j).value();
            }
            axpy(tau2, -gij, curvature_apply(Rt, tau0, di, dj));
        }

    RealTensor gamma(n, 3);
    for (std::size_t f = 0; f < gamma.size(); ++f) gamma.flat(f) = base.gamma.flat(f).value();
    return {project_from_natural(gamma, bp.v, tau0), project_from_natural(gamma, bp.v, tau2)};
}

const Criterion& ClassificationReport::get(const std::string& name) const {
    for (const auto& c : criteria)
        if (c.name == name) return c;
    throw std::out_of_range("no classification criterion '" + name + "'");
}

ClassificationReport classify(const ChartManifold& m, const VectorFieldSpec& xi, std::span<const Vec> points, double delta1,
                              double delta2, double tol) {
    ClassificationReport rep;
    rep.field = xi.name;
    rep.delta1 = delta1;
    rep.delta2 = delta2;
    rep.tol = tol;
    rep.points = points.size();
    for (const char* name : {"harmonic_vf", "harmonic_map", "biharmonic_vf", "biharmonic_map", "sesqui_vf", "sesqui_map", "parallel"})
        rep.criteria.push_back({name, 0.0, {}, false});

    for (const auto& p : points) {
        const TensionReport t = tension_report(m, xi, p, delta1, delta2);
        const double res[7] = {sup_norm(t.lap),         std::max(sup_norm(t.S), sup_norm(t.lap)),
                               sup_norm(t.tau2.w),      sup_norm(t.tau2),
                               sup_norm(t.sesqui.w),    sup_norm(t.sesqui),
                               sup_norm(t.nabla_xi)};
        for (std::size_t k = 0; k < rep.criteria.size(); ++k) {
            auto& c = rep.criteria[k];
            if (res[k] > c.max_residual || c.worst_point.empty() || std::isnan(res[k])) {
                c.max_residual = std::isnan(res[k]) ? res[k] : std::max(c.max_residual, res[k]);
                c.worst_point = p;
            }
        }
    }
    for (auto& c : rep.criteria) c.flag = !points.empty() && c.max_residual < tol;
    return rep;
}

ProductRuleResidual product_rule_check(const ChartManifold& m, const Expr& f, const VectorFieldSpec& xi,
                                       std::span<const double> p, LaplacianSign sign) {
    const VectorFieldSpec fxi = scaled(f, xi);
    const OperatorJets a = operator_jets(m, fxi, p, false);
    const OperatorJets b = operator_jets(m, xi, p, false);
    const double fv = f.eval(p, m.param_values());
    const GradLaplace gl = grad_and_laplace(m, f, p, sign);

    const Vec xi0 = vec_values(b.xi);
    Vec rhs = scale(fv, vec_values(b.lap));
    axpy(rhs, -gl.laplacian, xi0);
    axpy(rhs, -2.0, apply_matrix(values(b.nxi), gl.grad));

    ProductRuleResidual r;
    r.laplacian = sup_norm(sub(vec_values(a.lap), rhs));
    r.s_scaling = sup_norm(sub(vec_values(a.S), scale(fv * fv, vec_values(b.S))));
    return r;
}

LaplacianSign resolved_laplacian_sign() {
    static const LaplacianSign sign = [] {
        const ChartManifold polar = builtin_manifold("polar-r2");
        const VectorFieldSpec e1 = VectorFieldSpec::parse(polar, {"1", "0"}, FrameTag::Orthonormal, "e1");
        const Expr f = polar.parse("r");
        const Vec p{2.0, 0.7};
        const double plus = product_rule_check(polar, f, e1, p, LaplacianSign::PlusTrace).laplacian;
        const double minus = product_rule_check(polar, f, e1, p, LaplacianSign::MinusTrace).laplacian;
        return plus <= minus ? LaplacianSign::PlusTrace : LaplacianSign::MinusTrace;
    }();
    return sign;
}

Conventions conventions() {
    Conventions c;
    c.curvature = "R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z";
    c.laplacian = resolved_laplacian_sign() == LaplacianSign::PlusTrace ? "Delta f = +tr_g Hess f" : "Delta f = -tr_g Hess f";
    c.rough_laplacian = "lap xi = -g^{ij} (nabla^2 xi)_ij";
    c.trace = "coordinate trace g^{ij} over the full dimension";
    c.bundle_reading = "phi u read as phi v";
    return c;
}

}  // namespace sasaki
