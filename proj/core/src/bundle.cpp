#include "sasaki/bundle.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include "sasaki/sampling.hpp"

namespace sasaki {

LiftedVector& LiftedVector::operator+=(const LiftedVector& o) {
    axpy(h, 1.0, o.h);
    axpy(w, 1.0, o.w);
    return *this;
}

LiftedVector& LiftedVector::operator-=(const LiftedVector& o) {
    axpy(h, -1.0, o.h);
    axpy(w, -1.0, o.w);
    return *this;
}

LiftedVector& LiftedVector::operator*=(double s) {
    for (double& x : h) x *= s;
    for (double& x : w) x *= s;
    return *this;
}

LiftedVector operator+(LiftedVector a, const LiftedVector& b) { return a += b; }
LiftedVector operator-(LiftedVector a, const LiftedVector& b) { return a -= b; }
LiftedVector operator*(double s, LiftedVector a) { return a *= s; }

double sup_norm(const LiftedVector& x) { return std::max(sup_norm(x.h), sup_norm(x.w)); }

const char* to_string(UReading r) { return r == UReading::PhiV ? "phi_v" : "plain_v"; }

double bundle_inner(const RealTensor& g, const RealTensor& phi, const LiftedVector& a, const LiftedVector& b) {
    return inner(g, a.h, b.h) + inner(g, a.w, apply_matrix(phi, b.w));
}

namespace {

/// N^k_i = Gamma^k_ij v^j, the connection map of the horizontal distribution.
RealTensor connection_map(const RealTensor& gamma, const Vec& v) {
    const int n = gamma.dim();
    RealTensor out(n, 2);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j = 0; j < n; ++j) s += gamma(k, i, j) * v[static_cast<std::size_t>(j)];
            out(k, i) = s;
        }
    return out;
}

void check_point(const ChartManifold& m, const BundlePoint& bp) {
    if (bp.p.size() != static_cast<std::size_t>(m.dim()) || bp.v.size() != bp.p.size())
        throw std::invalid_argument("bundle point has wrong dimension for '" + m.name() + "'");
}

}  // namespace

RealTensor sasaki_phi_metric(const ChartManifold& m, const BundlePoint& bp) {
    check_point(m, bp);
    const int n = m.dim();
    const GeometryAtPoint base = christoffel(m, bp.p);
    const RealTensor N = connection_map(base.gamma, bp.v);
    RealTensor gphi(n, 2);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            double s = 0.0;
            for (int c = 0; c < n; ++c) s += base.g(a, c) * base.phi(c, b);
            gphi(a, b) = s;
        }
    RealTensor G(2 * n, 2);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double xx = base.g(i, j);
            double xv = 0.0;
            for (int a = 0; a < n; ++a) {
                xv += N(a, i) * gphi(a, j);
                for (int b = 0; b < n; ++b) xx += N(a, i) * N(b, j) * gphi(a, b);
            }
            G(i, j) = xx;
            G(i, n + j) = xv;
            G(n + j, i) = xv;
            G(n + i, n + j) = gphi(i, j);
        }
    return G;
}

Vec lift_to_natural(const RealTensor& gamma, const Vec& v, const LiftedVector& x) {
    const int n = gamma.dim();
    const RealTensor N = connection_map(gamma, v);
    Vec out(static_cast<std::size_t>(2 * n), 0.0);
    for (int k = 0; k < n; ++k) {
        out[static_cast<std::size_t>(k)] = x.h[static_cast<std::size_t>(k)];
        double s = x.w[static_cast<std::size_t>(k)];
        for (int i = 0; i < n; ++i) s -= N(k, i) * x.h[static_cast<std::size_t>(i)];
        out[static_cast<std::size_t>(n + k)] = s;
    }
    return out;
}

LiftedVector project_from_natural(const RealTensor& gamma, const Vec& v, const Vec& x) {
    const int n = gamma.dim();
    const RealTensor N = connection_map(gamma, v);
    LiftedVector out = LiftedVector::zero(n);
    for (int k = 0; k < n; ++k) out.h[static_cast<std::size_t>(k)] = x[static_cast<std::size_t>(k)];
    for (int k = 0; k < n; ++k) {
        double s = x[static_cast<std::size_t>(n + k)];
        for (int i = 0; i < n; ++i) s += N(k, i) * out.h[static_cast<std::size_t>(i)];
        out.w[static_cast<std::size_t>(k)] = s;
    }
    return out;
}

namespace {

/// (nabla_W Z)^k at p with Z given by first-order jets.
Vec covariant_along(const RealTensor& gamma, const Vec& w, const JetVec& z) {
    const int n = gamma.dim();
    Vec out(static_cast<std::size_t>(n), 0.0);
    for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            double d = z[static_cast<std::size_t>(k)].partial(i).value();
            for (int j = 0; j < n; ++j) d += gamma(k, i, j) * z[static_cast<std::size_t>(j)].value();
            s += w[static_cast<std::size_t>(i)] * d;
        }
        out[static_cast<std::size_t>(k)] = s;
    }
    return out;
}

}  // namespace

LiftedVector structural_connection(const ChartManifold& m, const BundlePoint& bp, const LiftedField& a, const LiftedField& b) {
    check_point(m, bp);
    const int n = m.dim();
    const GeometryAtPoint base = curvature(m, bp.p);
    const Vec W = values(field_jets(m, a.field, bp.p, 0));
    const JetVec Z = field_jets(m, b.field, bp.p, 1);
    const Vec Zv = values(Z);
    const Vec phiv = apply_matrix(base.phi, bp.v);

    LiftedVector out = LiftedVector::zero(n);
    if (a.kind == LiftKind::Horizontal && b.kind == LiftKind::Horizontal) {
        out.h = covariant_along(base.gamma, W, Z);
        out.w = scale(-0.5, curvature_apply(base.curvature, W, Zv, bp.v));
    } else if (a.kind == LiftKind::Horizontal) {
        out.h = scale(0.5, curvature_apply(base.curvature, phiv, Zv, W));
        out.w = covariant_along(base.gamma, W, Z);
    } else if (b.kind == LiftKind::Horizontal) {
        out.h = scale(0.5, curvature_apply(base.curvature, phiv, W, Zv));
    }
    return out;
}

namespace {

struct CurvatureTerms {
    const RealTensor& R;
    const RealTensor& nR;
    const RealTensor& phi;
    const Vec& v;
    Vec phiv;
    UReading reading;

    Vec r(const Vec& a, const Vec& b, const Vec& c) const { return curvature_apply(R, a, b, c); }
    Vec nr(const Vec& d, const Vec& a, const Vec& b, const Vec& c) const { return nabla_curvature_apply(nR, d, a, b, c); }

    LiftedVector hhh(const Vec& X, const Vec& Y, const Vec& Z) const {
        LiftedVector out;
        out.h = r(X, Y, Z);
        axpy(out.h, 0.5, r(phiv, r(X, Y, v), Z));
        axpy(out.h, 0.25, r(phiv, r(X, Z, v), Y));
        axpy(out.h, -0.25, r(phiv, r(Y, Z, v), X));
        out.w = scale(0.5, nr(Z, X, Y, v));
        return out;
    }

    LiftedVector hvv(const Vec& X, const Vec& Y, const Vec& Z) const {
        LiftedVector out = LiftedVector::zero(static_cast<int>(v.size()));
        out.h = scale(-0.5, r(apply_matrix(phi, Y), Z, X));
        axpy(out.h, -0.25, r(v, Y, r(v, Z, X)));
        return out;
    }

    LiftedVector vvh(const Vec& X, const Vec& Y, const Vec& Z) const {
        LiftedVector out = LiftedVector::zero(static_cast<int>(v.size()));
        out.h = scale(0.25, r(v, X, r(v, Y, Z)));
        axpy(out.h, -0.25, r(v, Y, r(v, X, Z)));
        axpy(out.h, 1.0, r(apply_matrix(phi, X), Y, Z));
        return out;
    }

    LiftedVector hvh(const Vec& X, const Vec& Y, const Vec& Z) const {
        LiftedVector out;
        out.w = scale(0.25, r(r(phiv, Y, Z), X, v));
        axpy(out.w, 0.5, r(X, Z, Y));
        out.h = scale(0.5, nr(X, phiv, Y, Z));
        return out;
    }

    LiftedVector hhv(const Vec& X, const Vec& Y, const Vec& Z) const {
        const Vec& u = reading == UReading::PhiV ? phiv : v;
        LiftedVector out;
        out.h = scale(0.5, nr(X, phiv, Z, Y));
        axpy(out.h, -0.5, nr(Y, phiv, Z, X));
        out.w = scale(0.25, r(r(u, Z, Y), X, v));
        axpy(out.w, -0.25, r(r(phiv, Z, X), Y, v));
        axpy(out.w, 1.0, r(X, Y, Z));
        return out;
    }
};

bool nonzero(const Vec& x) {
    return std::any_of(x.begin(), x.end(), [](double c) { return c != 0.0; });
}

}  // namespace

LiftedVector structural_curvature(const GeometryAtPoint& base, const Vec& v, const LiftedVector& x, const LiftedVector& y,
                                  const LiftedVector& z, UReading reading) {
    if (base.nabla_R.empty()) throw std::invalid_argument("structural_curvature: base geometry lacks nabla R");
    const int n = base.curvature.dim();
    CurvatureTerms t{base.curvature, base.nabla_R, base.phi, v, apply_matrix(base.phi, v), reading};
    LiftedVector out = LiftedVector::zero(n);
    const bool xh = nonzero(x.h), xw = nonzero(x.w), yh = nonzero(y.h), yw = nonzero(y.w), zh = nonzero(z.h), zw = nonzero(z.w);
    if (xh && yh && zh) out += t.hhh(x.h, y.h, z.h);
    if (xh && yh && zw) out += t.hhv(x.h, y.h, z.w);
    if (xh && yw && zh) out += t.hvh(x.h, y.w, z.h);
    if (xh && yw && zw) out += t.hvv(x.h, y.w, z.w);
    // R(VX, HY) = -R(HY, VX)
    if (xw && yh && zh) out -= t.hvh(y.h, x.w, z.h);
    if (xw && yh && zw) out -= t.hvv(y.h, x.w, z.w);
    if (xw && yw && zh) out += t.vvh(x.w, y.w, z.h);
    // (VX, VY)VZ vanishes.
    return out;
}

LiftedVector structural_curvature(const ChartManifold& m, const BundlePoint& bp, const LiftedVector& x, const LiftedVector& y,
                                  const LiftedVector& z, UReading reading) {
    check_point(m, bp);
    return structural_curvature(curvature_cov_deriv(m, bp.p), bp.v, x, y, z, reading);
}

namespace {

/// Bundle-chart jets in 2n variables (x then v), order 2. The metric is
/// quadratic in v, so only x-jets of the base data are needed.
struct BundleJets {
    int n = 0;
    JetTensor gamma_base;  // base Christoffels embedded in 2n variables
    GeometryJets geo;
};

BundleJets bundle_jets(const ChartManifold& m, const BundlePoint& bp, int order = 2,
                       GeometryLevel level = GeometryLevel::Curvature) {
    check_point(m, bp);
    if (order < 2 || order + 1 > kMaxJetOrder) throw std::invalid_argument("bundle_jets: order must be 2 or 3");
    const int n = m.dim();
    const int N2 = 2 * n;
    const GeometryJets base = geometry_from_metric(m.metric_jets(bp.p, order + 1), GeometryLevel::Connection);
    const JetTensor phi = m.structure_jets(bp.p, order);

    BundleJets out;
    out.n = n;
    out.gamma_base = JetTensor(n, 3, Jet(N2, order));
    for (std::size_t f = 0; f < base.gamma.size(); ++f) out.gamma_base.flat(f) = embed(base.gamma.flat(f), N2);

    JetVec v;
    for (int j = 0; j < n; ++j) v.push_back(Jet::variable(N2, order, n + j, bp.v[static_cast<std::size_t>(j)]));

    JetTensor conn(n, 2, Jet(N2, order));  // N^a_i = Gamma^a_ip v^p
    for (int a = 0; a < n; ++a)
        for (int i = 0; i < n; ++i) {
            Jet s(N2, order);
            for (int p = 0; p < n; ++p) s += out.gamma_base(a, i, p) * v[static_cast<std::size_t>(p)];
            conn(a, i) = std::move(s);
        }
    JetTensor g(n, 2, Jet(N2, order));
    JetTensor gphi(n, 2, Jet(N2, order));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) g(a, b) = embed(base.g(a, b).truncated(order), N2);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            Jet s(N2, order);
            for (int c = 0; c < n; ++c) s += g(a, c) * embed(phi(c, b), N2);
            gphi(a, b) = std::move(s);
        }

    JetTensor G(N2, 2, Jet(N2, order));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Jet xx = g(i, j);
            Jet xv(N2, order);
            for (int a = 0; a < n; ++a) {
                xv += conn(a, i) * gphi(a, j);
                for (int b = 0; b < n; ++b) xx += conn(a, i) * conn(b, j) * gphi(a, b);
            }
            G(i, j) = std::move(xx);
            G(i, n + j) = xv;
            G(n + j, i) = std::move(xv);
            G(n + i, n + j) = gphi(i, j);
        }
    out.geo = geometry_from_metric(G, level);
    return out;
}

Vec bundle_coordinates(const BundlePoint& bp) {
    Vec q = bp.p;
    q.insert(q.end(), bp.v.begin(), bp.v.end());
    return q;
}

RealTensor base_gamma_values(const BundleJets& b) {
    const int n = b.n;
    RealTensor out(n, 3);
    for (std::size_t f = 0; f < out.size(); ++f) out.flat(f) = b.gamma_base.flat(f).value();
    return out;
}

}  // namespace

GeometryJets bundle_chart_geometry(const ChartManifold& m, const BundlePoint& bp, int order, GeometryLevel level) {
    return bundle_jets(m, bp, order, level).geo;
}

GeometryAtPoint direct_bundle_geometry(const ChartManifold& m, const BundlePoint& bp) {
    const BundleJets b = bundle_jets(m, bp);
    return to_point_values(b.geo, bundle_coordinates(bp));
}

LiftedVector direct_connection(const ChartManifold& m, const BundlePoint& bp, const LiftedField& a, const LiftedField& b) {
    const BundleJets bj = bundle_jets(m, bp);
    const int n = bj.n;
    const int N2 = 2 * n;
    const RealTensor gamma = base_gamma_values(bj);

    const Vec Wv = values(field_jets(m, a.field, bp.p, 0));
    const Vec A = lift_to_natural(gamma, bp.v,
                                  a.kind == LiftKind::Horizontal ? LiftedVector::horizontal(Wv) : LiftedVector::vertical(Wv));

    // Natural components of the lifted field B as first-order jets on the chart.
    const JetVec Zb = field_jets(m, b.field, bp.p, 1);
    JetVec Z;
    for (const auto& z : Zb) Z.push_back(embed(z, N2));
    JetVec B(static_cast<std::size_t>(N2), Jet(N2, 1));
    if (b.kind == LiftKind::Horizontal) {
        for (int k = 0; k < n; ++k) {
            B[static_cast<std::size_t>(k)] = Z[static_cast<std::size_t>(k)];
            Jet s(N2, 1);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    s -= bj.gamma_base(k, i, j) * Jet::variable(N2, 1, n + j, bp.v[static_cast<std::size_t>(j)]) *
                         Z[static_cast<std::size_t>(i)];
            B[static_cast<std::size_t>(n + k)] = std::move(s);
        }
    } else {
        for (int k = 0; k < n; ++k) B[static_cast<std::size_t>(n + k)] = Z[static_cast<std::size_t>(k)];
    }

    Vec out(static_cast<std::size_t>(N2), 0.0);
    for (int be = 0; be < N2; ++be) {
        double s = 0.0;
        for (int al = 0; al < N2; ++al) {
            const double aa = A[static_cast<std::size_t>(al)];
            if (aa == 0.0) continue;
            s += aa * B[static_cast<std::size_t>(be)].partial(al).value();
            for (int ga = 0; ga < N2; ++ga) s += bj.geo.gamma(be, al, ga).value() * aa * B[static_cast<std::size_t>(ga)].value();
        }
        out[static_cast<std::size_t>(be)] = s;
    }
    return project_from_natural(gamma, bp.v, out);
}

LiftedVector direct_curvature(const ChartManifold& m, const BundlePoint& bp, const LiftedVector& x, const LiftedVector& y,
                              const LiftedVector& z) {
    const BundleJets bj = bundle_jets(m, bp);
    const RealTensor gamma = base_gamma_values(bj);
    const RealTensor R = values(bj.geo.riemann);
    const Vec out = curvature_apply(R, lift_to_natural(gamma, bp.v, x), lift_to_natural(gamma, bp.v, y),
                                    lift_to_natural(gamma, bp.v, z));
    return project_from_natural(gamma, bp.v, out);
}

bool OracleReport::pass() const {
    return std::all_of(cases.begin(), cases.end(), [this](const OracleCase& c) { return c.max_residual < tol; });
}

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + static_cast<double>(rng() >> 11) * 0x1.0p-53 * (hi - lo);
}

Vec random_vector(std::mt19937_64& rng, int n) {
    Vec x(static_cast<std::size_t>(n));
    for (double& c : x) c = uniform(rng, -1.0, 1.0);
    return x;
}

/// Random affine-plus-quadratic field centred at p, so that both its value
/// and its first derivatives at p are generic.
VectorFieldSpec random_field(std::mt19937_64& rng, const ChartManifold& m, const Vec& p) {
    const int n = m.dim();
    const auto& coords = m.coords();
    const auto& params = m.param_names();
    VectorFieldSpec f;
    for (int k = 0; k < n; ++k) {
        Expr e = Expr::constant(uniform(rng, -1.0, 1.0), coords, params);
        for (int j = 0; j < n; ++j) {
            const Expr dx = Expr::coordinate(j, coords, params) - Expr::constant(p[static_cast<std::size_t>(j)], coords, params);
            e = e + uniform(rng, -1.0, 1.0) * dx;
            if (j == k) e = e + uniform(rng, -1.0, 1.0) * (dx * dx);
        }
        f.components.push_back(e);
    }
    return f;
}

void record(OracleCase& c, double r, const BundlePoint& bp) {
    if (r > c.max_residual || c.worst_point.p.empty()) {
        c.max_residual = std::max(c.max_residual, r);
        c.worst_point = bp;
    }
}

}  // namespace

std::vector<BundlePoint> random_bundle_points(const ChartManifold& m, int count, std::uint64_t seed) {
    const auto ps = random_points(m.domain(), count, seed);
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<BundlePoint> out;
    for (const auto& p : ps) out.push_back({p, random_vector(rng, m.dim())});
    return out;
}

OracleReport verify_structural_vs_direct(const ChartManifold& m, std::span<const BundlePoint> sample, double tol,
                                         std::uint64_t seed) {
    const int n = m.dim();
    std::mt19937_64 rng(seed);
    const char* conn_names[4] = {"connection_HH", "connection_HV", "connection_VH", "connection_VV"};
    const char* curv_names[7] = {"curvature_HHH", "curvature_HVV", "curvature_VVH", "curvature_HVH",
                                 "curvature_HHV", "curvature_VVV", "curvature_mixed"};
    std::vector<OracleCase> conn(4), curv(7), curv_plain(7);
    for (int k = 0; k < 4; ++k) conn[static_cast<std::size_t>(k)].name = conn_names[k];
    for (int k = 0; k < 7; ++k) curv[static_cast<std::size_t>(k)].name = curv_plain[static_cast<std::size_t>(k)].name = curv_names[k];

    for (const auto& bp : sample) {
        const VectorFieldSpec W = random_field(rng, m, bp.p);
        const VectorFieldSpec Z = random_field(rng, m, bp.p);
        for (int k = 0; k < 4; ++k) {
            const LiftedField a{k < 2 ? LiftKind::Horizontal : LiftKind::Vertical, W};
            const LiftedField b{k % 2 == 0 ? LiftKind::Horizontal : LiftKind::Vertical, Z};
            const LiftedVector s = structural_connection(m, bp, a, b);
            const LiftedVector d = direct_connection(m, bp, a, b);
            record(conn[static_cast<std::size_t>(k)], sup_norm(s - d), bp);
        }

        const GeometryAtPoint base = curvature_cov_deriv(m, bp.p);
        const Vec X = random_vector(rng, n), Y = random_vector(rng, n), Zc = random_vector(rng, n);
        using LV = LiftedVector;
        const std::array<std::array<LV, 3>, 7> args{{
            {LV::horizontal(X), LV::horizontal(Y), LV::horizontal(Zc)},
            {LV::horizontal(X), LV::vertical(Y), LV::vertical(Zc)},
            {LV::vertical(X), LV::vertical(Y), LV::horizontal(Zc)},
            {LV::horizontal(X), LV::vertical(Y), LV::horizontal(Zc)},
            {LV::horizontal(X), LV::horizontal(Y), LV::vertical(Zc)},
            {LV::vertical(X), LV::vertical(Y), LV::vertical(Zc)},
            {LV{X, Y}, LV{Y, Zc}, LV{Zc, X}},
        }};
        for (std::size_t k = 0; k < args.size(); ++k) {
            const auto& [x, y, z] = args[k];
            const LiftedVector d = direct_curvature(m, bp, x, y, z);
            record(curv[k], sup_norm(structural_curvature(base, bp.v, x, y, z, UReading::PhiV) - d), bp);
            record(curv_plain[k], sup_norm(structural_curvature(base, bp.v, x, y, z, UReading::PlainV) - d), bp);
        }
    }

    OracleReport report;
    report.manifold = m.name();
    report.tol = tol;
    report.points = sample.size();
    report.phi_v_residual = curv[4].max_residual;
    report.plain_v_residual = curv_plain[4].max_residual;
    report.winning_reading = report.plain_v_residual < report.phi_v_residual ? UReading::PlainV : UReading::PhiV;
    report.cases = conn;
    const auto& chosen = report.winning_reading == UReading::PhiV ? curv : curv_plain;
    report.cases.insert(report.cases.end(), chosen.begin(), chosen.end());
    return report;
}

}  // namespace sasaki
