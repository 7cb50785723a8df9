#pragma once

#include <span>
#include <string>
#include <vector>

#include "sasaki/field.hpp"
#include "sasaki/manifold.hpp"

namespace sasaki {

/// Tensor-product Gauss-Legendre rule over a coordinate box.
struct QuadratureSpec {
    std::vector<Interval> box;
    int points_per_axis = 16;
};

struct QuadratureRule {
    std::vector<Vec> nodes;
    std::vector<double> weights;
};

QuadratureRule gauss_legendre_box(const QuadratureSpec& spec);

/// Pairwise (cascade) summation; the order depends only on the input length.
double pairwise_sum(std::span<const double> terms);

/// E = int (m + 1/2 tr_g g(nabla xi, phi nabla xi)) v_g with m = dim/2,
/// E2 = 1/2 int g^phi(tau, tau) v_g (signed; g^phi may be indefinite) and
/// E_delta = int (2 delta1 e + 2 delta2 e2) v_g, summed node by node.
struct Energies {
    double E = 0.0;
    double E2 = 0.0;
    double E_delta = 0.0;
    double volume = 0.0;  // int v_g
    double delta1 = 0.0;
    double delta2 = 0.0;
};

Energies energy_functionals(const ChartManifold& m, const VectorFieldSpec& xi, const QuadratureSpec& quad, double delta1,
                            double delta2);

/// Energies at the requested rule and at twice as many points per axis.
struct EnergyReport {
    Energies coarse;
    Energies fine;
    int points_per_axis = 0;
    double max_rel_change = 0.0;
    std::vector<std::string> warnings;
};

EnergyReport energy_report(const ChartManifold& m, const VectorFieldSpec& xi, const QuadratureSpec& quad, double delta1,
                           double delta2);

/// xi_t = xi + t * bump * W. Integrals run over `support`, outside of which
/// bump * W vanishes, so they are the derivatives of the energies over any
/// larger region.
struct VariationSpec {
    VectorFieldSpec W;
    Expr bump;
    std::vector<Interval> support;
    std::vector<double> steps{1e-2, 2e-2};
};

/// prod_k ((s_k - a_k)(b_k - s_k) / (half width)^2)^3: peak 1, vanishing to
/// second order on the boundary of the box.
Expr default_bump(const ChartManifold& m, const std::vector<Interval>& box);

/// Largest |bump * W| component over sampled points of the box boundary.
double boundary_leakage(const ChartManifold& m, const VariationSpec& var, int per_face = 7);

struct VariationReport {
    double delta1 = 0.0;
    double delta2 = 0.0;
    int points_per_axis = 0;
    std::vector<double> steps;
    std::vector<double> stencil;  // 5-point central difference per step
    double lhs = 0.0;             // Richardson combination of the stencil values
    double rhs = 0.0;             // -2 int g^phi(tau_delta, V(bump W)) v_g
    double rhs_phi_form = 0.0;    // -2 int g(tau_delta^V, phi(bump W)) v_g, evaluated separately
    double mismatch = 0.0;        // |lhs - rhs| / (1 + |rhs|)
    double boundary_leakage = 0.0;
    // Bienergy alone: FD derivative against -int and -2 int g(tau2^V, phi(bump W)) v_g.
    double lhs_bienergy = 0.0;
    double bienergy_single = 0.0;
    double bienergy_doubled = 0.0;
    std::string bienergy_normalization;  // "single", "doubled" or "neither"
    double roundoff_estimate = 0.0;
    std::vector<std::string> warnings;
};

VariationReport first_variation_check(const ChartManifold& m, const VectorFieldSpec& xi, const VariationSpec& var,
                                      double delta1, double delta2, int points_per_axis = 16);

}  // namespace sasaki
