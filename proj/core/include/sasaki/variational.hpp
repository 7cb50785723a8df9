#pragma once

#include <span>
#include <string>
#include <vector>

#include "sasaki/bundle.hpp"
#include "sasaki/field.hpp"
#include "sasaki/geometry.hpp"

namespace sasaki {

/// Iterated covariant derivatives of xi at p: element d-1 holds nabla^d xi
/// with layout (k, m_d, ..., m_1), the most recent derivative slot first.
std::vector<RealTensor> covariant_derivs_vector(const ChartManifold& m, const VectorFieldSpec& xi, std::span<const double> p,
                                                int depth);

/// Rough Laplacian -g^{ij} (nabla^2 xi)_ij, applied once or twice.
Vec rough_laplacian(const ChartManifold& m, const VectorFieldSpec& xi, std::span<const double> p, int iterate = 1);

/// S(xi) = g^{ij} R(phi xi, nabla_i xi) d_j.
Vec s_field(const ChartManifold& m, const VectorFieldSpec& xi, std::span<const double> p);

/// Everything the tension-type fields are built from, at one point.
struct TensionReport {
    Vec at;
    Vec xi;
    Vec S;
    Vec lap;          // rough Laplacian of xi
    Vec lap2;         // rough Laplacian applied twice
    Vec lap_S;        // rough Laplacian of S(xi)
    Vec curvature_S;  // R(phi xi, lap xi) S(xi)
    Vec h_trace;      // trace block subtracted in the horizontal part of tau2
    Vec trace_term;   // trace block added in the vertical part of tau2
    RealTensor nabla_xi;  // (nabla_i xi)^k stored as (k, i)
    LiftedVector tau;
    LiftedVector tau2;
    LiftedVector sesqui;
    double delta1 = 0.0;
    double delta2 = 0.0;
};

TensionReport tension_report(const ChartManifold& m, const VectorFieldSpec& xi, std::span<const double> p, double delta1 = 0.0,
                             double delta2 = 1.0);

/// tau(xi) = (S(xi), -lap xi) as horizontal/vertical parts.
LiftedVector tension(const ChartManifold& m, const VectorFieldSpec& xi, std::span<const double> p);
LiftedVector bitension(const ChartManifold& m, const VectorFieldSpec& xi, std::span<const double> p);
/// Assembled from the individual blocks, not as delta1*tau + delta2*tau2.
LiftedVector sesqui_tension(const ChartManifold& m, const VectorFieldSpec& xi, std::span<const double> p, double delta1,
                            double delta2);

/// Pointwise data the energy densities need, from one second-order jet pass.
struct FirstOrderData {
    RealTensor g;
    RealTensor g_inv;
    RealTensor phi;
    RealTensor nabla_xi;  // (k, i)
    double sqrt_abs_det_g = 0.0;
    LiftedVector tau;
};
FirstOrderData first_order_data(const ChartManifold& m, const VectorFieldSpec& xi, std::span<const double> p);

/// Tension and bitension of xi viewed as a map M -> (TM, g^phi), computed
/// from the bundle-chart Levi-Civita geometry composed along the map. Uses
/// none of the closed forms above.
struct MapTension {
    LiftedVector tau;
    LiftedVector tau2;
};
MapTension map_tension_oracle(const ChartManifold& m, const VectorFieldSpec& xi, std::span<const double> p);

struct Criterion {
    std::string name;
    double max_residual = 0.0;
    Vec worst_point;
    bool flag = false;
};

/// Flags are set when the criterion's residual (coordinate sup-norm) stays
/// below tol at every sample point.
struct ClassificationReport {
    std::string field;
    double delta1 = 0.0;
    double delta2 = 0.0;
    double tol = 0.0;
    std::size_t points = 0;
    std::vector<Criterion> criteria;  // harmonic_vf, harmonic_map, biharmonic_vf, biharmonic_map, sesqui_vf, sesqui_map, parallel

    const Criterion& get(const std::string& name) const;
    bool flag(const std::string& name) const { return get(name).flag; }
};

ClassificationReport classify(const ChartManifold& m, const VectorFieldSpec& xi, std::span<const Vec> points, double delta1,
                              double delta2, double tol);

/// Residuals of lap(f xi) = f lap xi - (Delta f) xi - 2 nabla_{grad f} xi and
/// S(f xi) = f^2 S(xi), both as coordinate sup-norms.
struct ProductRuleResidual {
    double laplacian = 0.0;
    double s_scaling = 0.0;
};
ProductRuleResidual product_rule_check(const ChartManifold& m, const Expr& f, const VectorFieldSpec& xi,
                                       std::span<const double> p, LaplacianSign sign);

/// Picks the Laplacian sign for which the product rule holds for f = r,
/// xi = e_1 on the polar plane at r = 2.
LaplacianSign resolved_laplacian_sign();

/// Self-description of the conventions in force, for reports.
struct Conventions {
    std::string curvature;
    std::string laplacian;
    std::string rough_laplacian;
    std::string trace;
    std::string bundle_reading;
};
Conventions conventions();

}  // namespace sasaki
