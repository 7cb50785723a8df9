#include "sasaki/functionals.hpp"

#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "sasaki/bundle.hpp"
#include "sasaki/geometry.hpp"
#include "sasaki/variational.hpp"

namespace sasaki {

namespace {

std::size_t u(int i) { return static_cast<std::size_t>(i); }

struct GlTableDeleter {
    void operator()(gsl_integration_glfixed_table* t) const { gsl_integration_glfixed_table_free(t); }
};

double rel_change(double a, double b, double floor) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor}); }

/// Per-node energy densities (without the volume factor).
struct Density {
    double e = 0.0;
    double e2 = 0.0;
    double vol = 0.0;
};

Density density(const ChartManifold& m, const VectorFieldSpec& xi, std::span<const double> p) {
    const FirstOrderData d = first_order_data(m, xi, p);
    const int n = m.dim();
    double twisted = 0.0;
    for (int i = 0; i < n; ++i) {
        Vec ni(u(n));
        for (int k = 0; k < n; ++k) ni[u(k)] = d.nabla_xi(k, i);
        const Vec phi_ni = apply_matrix(d.phi, ni);
        for (int j = 0; j < n; ++j) {
            const double gij = d.g_inv(i, j);
            if (gij == 0.0) continue;
            Vec nj(u(n));
            for (int k = 0; k < n; ++k) nj[u(k)] = d.nabla_xi(k, j);
            twisted += gij * inner(d.g, nj, phi_ni);
        }
    }
    Density out;
    out.e = 0.5 * n + 0.5 * twisted;
    out.e2 = 0.5 * bundle_inner(d.g, d.phi, d.tau, d.tau);
    out.vol = d.sqrt_abs_det_g;
    return out;
}

Energies integrate(const ChartManifold& m, const VectorFieldSpec& xi, const QuadratureRule& rule, double delta1,
                   double delta2) {
    const std::size_t count = rule.nodes.size();
    std::vector<double> e(count), e2(count), ed(count), vol(count);
    for (std::size_t k = 0; k < count; ++k) {
        const Density d = density(m, xi, rule.nodes[k]);
        const double w = rule.weights[k] * d.vol;
        e[k] = w * d.e;
        e2[k] = w * d.e2;
        ed[k] = w * (2.0 * delta1 * d.e + 2.0 * delta2 * d.e2);
        vol[k] = w;
    }
    Energies out;
    out.E = pairwise_sum(e);
    out.E2 = pairwise_sum(e2);
    out.E_delta = pairwise_sum(ed);
    out.volume = pairwise_sum(vol);
    out.delta1 = delta1;
    out.delta2 = delta2;
    return out;
}

}  // namespace

QuadratureRule gauss_legendre_box(const QuadratureSpec& spec) {
    if (spec.points_per_axis < 1) throw std::invalid_argument("quadrature: points_per_axis must be positive");
    if (spec.box.empty()) throw std::invalid_argument("quadrature: empty box");
    const std::size_t n = u(spec.points_per_axis);
    std::unique_ptr<gsl_integration_glfixed_table, GlTableDeleter> table(gsl_integration_glfixed_table_alloc(n));
    if (!table) throw std::runtime_error("quadrature: cannot build Gauss-Legendre table");

    const std::size_t dim = spec.box.size();
    std::vector<std::vector<double>> x(dim, std::vector<double>(n)), w(dim, std::vector<double>(n));
    for (std::size_t a = 0; a < dim; ++a) {
        const Interval iv = spec.box[a];
        if (!(iv.hi > iv.lo)) throw std::invalid_argument("quadrature: degenerate interval");
        for (std::size_t i = 0; i < n; ++i) gsl_integration_glfixed_point(iv.lo, iv.hi, i, &x[a][i], &w[a][i], table.get());
    }

    QuadratureRule rule;
    std::vector<std::size_t> idx(dim, 0);
    while (true) {
        Vec node(dim);
        double weight = 1.0;
        for (std::size_t a = 0; a < dim; ++a) {
            node[a] = x[a][idx[a]];
            weight *= w[a][idx[a]];
        }
        rule.nodes.push_back(std::move(node));
        rule.weights.push_back(weight);
        std::size_t a = dim;
        while (a > 0) {
            --a;
            if (++idx[a] < n) break;
            idx[a] = 0;
            if (a == 0) return rule;
        }
    }
}

double pairwise_sum(std::span<const double> terms) {
    if (terms.size() <= 8) {
        double s = 0.0;
        for (double t : terms) s += t;
        return s;
    }
    const std::size_t half = terms.size() / 2;
    return pairwise_sum(terms.first(half)) + pairwise_sum(terms.subspan(half));
}

Energies energy_functionals(const ChartManifold& m, const VectorFieldSpec& xi, const QuadratureSpec& quad, double delta1,
                            double delta2) {
    if (quad.box.size() != u(m.dim())) throw std::invalid_argument("quadrature box dimension does not match the manifold");
    return integrate(m, xi, gauss_legendre_box(quad), delta1, delta2);
}

EnergyReport energy_report(const ChartManifold& m, const VectorFieldSpec& xi, const QuadratureSpec& quad, double delta1,
                           double delta2) {
    EnergyReport r;
    r.points_per_axis = quad.points_per_axis;
    r.coarse = energy_functionals(m, xi, quad, delta1, delta2);
    QuadratureSpec fine = quad;
    fine.points_per_axis *= 2;
    r.fine = energy_functionals(m, xi, fine, delta1, delta2);
    const double floor = 1e-12 * std::max(1.0, std::abs(r.fine.volume));
    r.max_rel_change = std::max({rel_change(r.coarse.E, r.fine.E, floor), rel_change(r.coarse.E2, r.fine.E2, floor),
                                 rel_change(r.coarse.E_delta, r.fine.E_delta, floor)});
    if (r.max_rel_change > 1e-4)
        r.warnings.push_back("quadrature not converged: doubling points per axis changes a functional by " +
                             std::to_string(r.max_rel_change) + " (relative)");
    return r;
}

Expr default_bump(const ChartManifold& m, const std::vector<Interval>& box) {
    if (box.size() != u(m.dim())) throw std::invalid_argument("bump box dimension does not match the manifold");
    const auto& coords = m.coords();
    const auto& params = m.param_names();
    Expr out = Expr::constant(1.0, coords, params);
    for (int k = 0; k < m.dim(); ++k) {
        const Interval iv = box[u(k)];
        const double half = 0.5 * (iv.hi - iv.lo);
        const Expr s = Expr::coordinate(k, coords, params);
        const Expr q = (1.0 / (half * half)) * ((s - Expr::constant(iv.lo, coords, params)) * (Expr::constant(iv.hi, coords, params) - s));
        out = out * (q * q * q);
    }
    return out;
}

double boundary_leakage(const ChartManifold& m, const VariationSpec& var, int per_face) {
    const int n = m.dim();
    const VectorFieldSpec bw = scaled(var.bump, var.W);
    double worst = 0.0;
    // Each face: one coordinate pinned to an end, the rest on a uniform grid.
    for (int k = 0; k < n; ++k) {
        for (double end : {var.support[u(k)].lo, var.support[u(k)].hi}) {
            std::vector<int> idx(u(n - 1), 0);
            while (true) {
                Vec p(u(n));
                int slot = 0;
                for (int a = 0; a < n; ++a) {
                    if (a == k) {
                        p[u(a)] = end;
                        continue;
                    }
                    const Interval iv = var.support[u(a)];
                    p[u(a)] = iv.lo + (iv.hi - iv.lo) * idx[u(slot)] / std::max(1, per_face - 1);
                    ++slot;
                }
                worst = std::max(worst, sup_norm(values(field_jets(m, bw, p, 0))));
                int a = n - 2;
                while (a >= 0 && ++idx[u(a)] == per_face) idx[u(a--)] = 0;
                if (a < 0) break;
            }
        }
    }
    return worst;
}

VariationReport first_variation_check(const ChartManifold& m, const VectorFieldSpec& xi, const VariationSpec& var,
                                      double delta1, double delta2, int points_per_axis) {
    if (var.support.size() != u(m.dim())) throw std::invalid_argument("variation support dimension does not match the manifold");
    if (var.steps.empty()) throw std::invalid_argument("variation needs at least one step");
    VariationReport r;
    r.delta1 = delta1;
    r.delta2 = delta2;
    r.points_per_axis = points_per_axis;
    r.steps = var.steps;
    r.boundary_leakage = boundary_leakage(m, var);
    if (r.boundary_leakage > 1e-12)
        r.warnings.push_back("bump * W does not vanish on the support boundary (max " + std::to_string(r.boundary_leakage) + ")");

    const QuadratureRule rule = gauss_legendre_box({var.support, points_per_axis});
    const VectorFieldSpec bw = scaled(var.bump, var.W);
    auto energies_at = [&](double t) { return integrate(m, combine(1.0, xi, t, bw, m), rule, delta1, delta2); };

    double scale_e = 0.0;
    std::vector<double> bienergy_stencil;
    for (double h : var.steps) {
        const Energies a = energies_at(2 * h), b = energies_at(h), c = energies_at(-h), d = energies_at(-2 * h);
        r.stencil.push_back((-a.E_delta + 8 * b.E_delta - 8 * c.E_delta + d.E_delta) / (12 * h));
        bienergy_stencil.push_back((-a.E2 + 8 * b.E2 - 8 * c.E2 + d.E2) / (12 * h));
        scale_e = std::max({scale_e, std::abs(a.E_delta), std::abs(b.E_delta), std::abs(c.E_delta), std::abs(d.E_delta),
                            std::abs(a.E2), std::abs(d.E2)});
    }
    // The stencil error is O(h^4); combine the two smallest steps accordingly.
    auto richardson = [&](const std::vector<double>& dvals) {
        if (dvals.size() < 2) return dvals.front();
        const double h1 = std::pow(var.steps[0], 4), h2 = std::pow(var.steps[1], 4);
        return (h2 * dvals[0] - h1 * dvals[1]) / (h2 - h1);
    };
    r.lhs = richardson(r.stencil);
    r.lhs_bienergy = richardson(bienergy_stencil);
    const double hmin = *std::min_element(var.steps.begin(), var.steps.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
    r.roundoff_estimate = 18.0 / 12.0 * std::numeric_limits<double>::epsilon() * scale_e / std::abs(hmin);
    if (r.roundoff_estimate > std::max(1e-8, 1e-4 * std::abs(r.lhs)))
        r.warnings.push_back("finite-difference step is small enough for round-off to dominate (estimate " +
                             std::to_string(r.roundoff_estimate) + ")");

    const std::size_t count = rule.nodes.size();
    std::vector<double> rhs(count), phi_form(count), bi(count);
    for (std::size_t k = 0; k < count; ++k) {
        const Vec& p = rule.nodes[k];
        const FirstOrderData d = first_order_data(m, xi, p);
        const TensionReport t = tension_report(m, xi, p, delta1, delta2);
        const Vec v = values(field_jets(m, bw, p, 0));
        const double w = rule.weights[k] * d.sqrt_abs_det_g;
        rhs[k] = -2.0 * w * bundle_inner(d.g, d.phi, t.sesqui, LiftedVector::vertical(v));
        const Vec phi_v = apply_matrix(d.phi, v);
        phi_form[k] = -2.0 * w * inner(d.g, t.sesqui.w, phi_v);
        bi[k] = -w * inner(d.g, t.tau2.w, phi_v);
    }
    r.rhs = pairwise_sum(rhs);
    r.rhs_phi_form = pairwise_sum(phi_form);
    r.bienergy_single = pairwise_sum(bi);
    r.bienergy_doubled = 2.0 * r.bienergy_single;
    r.mismatch = std::abs(r.lhs - r.rhs) / (1.0 + std::abs(r.rhs));

    const double ms = std::abs(r.lhs_bienergy - r.bienergy_single) / (1.0 + std::abs(r.bienergy_single));
    const double md = std::abs(r.lhs_bienergy - r.bienergy_doubled) / (1.0 + std::abs(r.bienergy_doubled));
    if (std::abs(r.bienergy_single) < 1e-9 && std::abs(r.lhs_bienergy) < 1e-9)
        r.bienergy_normalization = "indeterminate";
    else if (ms < 1e-3 && ms < md)
        r.bienergy_normalization = "single";
    else if (md < 1e-3)
        r.bienergy_normalization = "doubled";
    else
        r.bienergy_normalization = "neither";
    return r;
}

}  // namespace sasaki
