#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>

#include "sasaki/manifold.hpp"
#include "sasaki/tensor.hpp"

namespace sasaki {

class SingularMetricError : public std::runtime_error {
public:
    explicit SingularMetricError(double det)
        : std::runtime_error("singular metric (det g = " + std::to_string(det) + ")"), det_(det) {}
    double det() const { return det_; }

private:
    double det_;
};

enum class GeometryLevel { Connection = 1, Curvature = 2, CurvatureDerivative = 3 };

/// Levi-Civita geometry of a metric given by jets at one point.
///
/// Index layouts:
///   gamma(k, i, j)            = Gamma^k_ij
///   riemann(l, k, i, j)       = R^l_kij, with R(d_i, d_j) d_k = R^l_kij d_l
///   nabla_riemann(l, m, k, i, j) = (nabla_m R)^l_kij
/// Each level loses one jet order: a metric of order K gives gamma of order
/// K-1, riemann of order K-2 and nabla_riemann of order K-3.
struct GeometryJets {
    int dim = 0;
    JetTensor g;
    JetTensor g_inv;
    JetTensor gamma;
    JetTensor riemann;
    JetTensor nabla_riemann;
};

/// Inverse of a jet matrix (rank-2 tensor) via a truncated Neumann series.
JetTensor jet_inverse(const JetTensor& a);

GeometryJets geometry_from_metric(const JetTensor& g, GeometryLevel level);

/// Covariant derivative of a tensor with one upper slot (slot 0) and the
/// remaining slots lower. The new derivative slot is inserted at position 1:
/// out(k, m, i1..ir) = (nabla_m T)^k_{i1..ir}.
JetTensor covariant_derivative(const JetTensor& t, const JetTensor& gamma);

/// Same for a purely covariant rank-2 tensor: out(m, i, j) = (nabla_m T)_ij.
JetTensor covariant_derivative_lower2(const JetTensor& t, const JetTensor& gamma);

/// Base-manifold data needed by the vector-field operators.
struct BaseJets {
    GeometryJets geo;
    JetTensor phi;  // phi(i, j) = phi^i_j
};

BaseJets base_jets(const ChartManifold& m, std::span<const double> p, int metric_order, GeometryLevel level);

/// Numeric geometry at one point. Fields beyond the requested level are empty.
struct GeometryAtPoint {
    Vec p;
    RealTensor g;
    RealTensor g_inv;
    double det_g = 0.0;
    RealTensor gamma;
    RealTensor dgamma;  // dgamma(l, k, i, j) = d_l Gamma^k_ij
    RealTensor curvature;
    RealTensor nabla_R;  // layout of GeometryJets::nabla_riemann
    RealTensor phi;
    std::optional<Vec> grad_f;
    std::optional<double> laplace_f;
};

GeometryAtPoint geometry_at(const ChartManifold& m, std::span<const double> p, GeometryLevel level);
GeometryAtPoint christoffel(const ChartManifold& m, std::span<const double> p);
GeometryAtPoint curvature(const ChartManifold& m, std::span<const double> p);
GeometryAtPoint curvature_cov_deriv(const ChartManifold& m, std::span<const double> p);

/// Builds the numeric view of already computed jets.
GeometryAtPoint to_point_values(const GeometryJets& geo, std::span<const double> p);

/// Laplacian convention: PlusTrace means Delta f = +tr_g Hess f.
enum class LaplacianSign { PlusTrace, MinusTrace };

struct GradLaplace {
    Vec grad;
    double laplacian = 0.0;
};

double trace_hessian(const ChartManifold& m, const Expr& f, std::span<const double> p);
GradLaplace grad_and_laplace(const ChartManifold& m, const Expr& f, std::span<const double> p, LaplacianSign sign);

// Numeric tensor helpers shared by the operator modules.

/// R(X, Y) Z for R stored as riemann(l, k, i, j).
Vec curvature_apply(const RealTensor& riemann, const Vec& x, const Vec& y, const Vec& z);
/// (nabla_W R)(X, Y) Z for the nabla_riemann layout.
Vec nabla_curvature_apply(const RealTensor& nabla_riemann, const Vec& w, const Vec& x, const Vec& y, const Vec& z);
/// A^i_j x^j.
Vec apply_matrix(const RealTensor& a, const Vec& x);
double inner(const RealTensor& g, const Vec& a, const Vec& b);
double sup_norm(const Vec& v);
double sup_norm(const RealTensor& t);
Vec add(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);
Vec scale(double s, const Vec& a);
/// a += s * b
void axpy(Vec& a, double s, const Vec& b);

}  // namespace sasaki
