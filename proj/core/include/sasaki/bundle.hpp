#pragma once

#include <span>
#include <string>
#include <vector>

#include "sasaki/field.hpp"
#include "sasaki/geometry.hpp"

namespace sasaki {

struct BundlePoint {
    Vec p;
    Vec v;
};

/// Element of T_(p,v)TM as horizontal part h plus vertical part w.
struct LiftedVector {
    Vec h;
    Vec w;

    static LiftedVector zero(int n) { return {Vec(static_cast<std::size_t>(n), 0.0), Vec(static_cast<std::size_t>(n), 0.0)}; }
    static LiftedVector horizontal(const Vec& x) { return {x, Vec(x.size(), 0.0)}; }
    static LiftedVector vertical(const Vec& x) { return {Vec(x.size(), 0.0), x}; }

    LiftedVector& operator+=(const LiftedVector& o);
    LiftedVector& operator-=(const LiftedVector& o);
    LiftedVector& operator*=(double s);
};

LiftedVector operator+(LiftedVector a, const LiftedVector& b);
LiftedVector operator-(LiftedVector a, const LiftedVector& b);
LiftedVector operator*(double s, LiftedVector a);
double sup_norm(const LiftedVector& x);

enum class LiftKind { Horizontal, Vertical };

/// Horizontal or vertical lift of a base vector field.
struct LiftedField {
    LiftKind kind = LiftKind::Horizontal;
    VectorFieldSpec field;
};

/// How to read the lone "phi u" in the (HX, HY)VZ curvature formula.
enum class UReading { PhiV, PlainV };
const char* to_string(UReading r);

/// g^phi(A, B) = g(h_A, h_B) + g(w_A, phi w_B).
double bundle_inner(const RealTensor& g, const RealTensor& phi, const LiftedVector& a, const LiftedVector& b);

/// Components of g^phi over the natural frame (d_x, d_v) of the bundle chart.
RealTensor sasaki_phi_metric(const ChartManifold& m, const BundlePoint& bp);

/// Natural-frame components (x part then v part) of a lifted vector, and back.
Vec lift_to_natural(const RealTensor& gamma, const Vec& v, const LiftedVector& x);
LiftedVector project_from_natural(const RealTensor& gamma, const Vec& v, const Vec& x);

/// Connection of the bundle assembled from base data, case by case.
LiftedVector structural_connection(const ChartManifold& m, const BundlePoint& bp, const LiftedField& a, const LiftedField& b);

/// Curvature of the bundle assembled from base R, nabla R, phi and v; general
/// arguments are expanded trilinearly over their H and V parts. `base` needs
/// curvature, nabla_R and phi.
LiftedVector structural_curvature(const GeometryAtPoint& base, const Vec& v, const LiftedVector& x, const LiftedVector& y,
                                  const LiftedVector& z, UReading reading = UReading::PhiV);
LiftedVector structural_curvature(const ChartManifold& m, const BundlePoint& bp, const LiftedVector& x, const LiftedVector& y,
                                  const LiftedVector& z, UReading reading = UReading::PhiV);

/// Levi-Civita geometry of (TM, g^phi) on the 4m-dimensional chart (x, v),
/// computed from the bundle metric alone: gamma and curvature are filled.
GeometryAtPoint direct_bundle_geometry(const ChartManifold& m, const BundlePoint& bp);

/// Jets of the bundle-chart geometry at (p, v) in 2n variables (x then v).
/// `order` is the order of the bundle metric jets (2 or 3).
GeometryJets bundle_chart_geometry(const ChartManifold& m, const BundlePoint& bp, int order, GeometryLevel level);

/// Oracle counterparts of the structural formulas.
LiftedVector direct_connection(const ChartManifold& m, const BundlePoint& bp, const LiftedField& a, const LiftedField& b);
LiftedVector direct_curvature(const ChartManifold& m, const BundlePoint& bp, const LiftedVector& x, const LiftedVector& y,
                              const LiftedVector& z);

struct OracleCase {
    std::string name;
    double max_residual = 0.0;
    BundlePoint worst_point;
};

struct OracleReport {
    std::string manifold;
    double tol = 0.0;
    std::size_t points = 0;
    std::vector<OracleCase> cases;       // cases using the winning reading
    double phi_v_residual = 0.0;         // (HX, HY)VZ case under each reading
    double plain_v_residual = 0.0;
    UReading winning_reading = UReading::PhiV;

    bool pass() const;
};

/// Random bundle points over the base domain; v has components in [-1, 1].
std::vector<BundlePoint> random_bundle_points(const ChartManifold& m, int count, std::uint64_t seed);

/// Compares structural and direct connection/curvature on random lifts at
/// every sample point.
OracleReport verify_structural_vs_direct(const ChartManifold& m, std::span<const BundlePoint> sample, double tol,
                                         std::uint64_t seed = 1);

}  // namespace sasaki
