#include <gtest/gtest.h>

#include <Eigen/Dense>

#include "sasaki/bundle.hpp"
#include "sasaki/builtins.hpp"
#include "sasaki/geometry.hpp"
#include "support.hpp"

using namespace sasaki;
using sasaki::test::uniform;

namespace {

Vec random_vec(int n) {
    Vec v(static_cast<std::size_t>(n));
    for (auto& x : v) x = uniform(-1, 1);
    return v;
}

LiftedVector random_lifted(int n) { return {random_vec(n), random_vec(n)}; }

double det(const RealTensor& a) {
    Eigen::MatrixXd m(a.dim(), a.dim());
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) m(i, j) = a(i, j);
    return m.determinant();
}

}  // namespace

class BundleOracle : public ::testing::TestWithParam<std::string> {};

TEST_P(BundleOracle, StructuralFormulasMatchDirectGeometry) {
    const ChartManifold m = GetParam() == "warped-r4" ? sasaki::test::warped_definition().build() : builtin_manifold(GetParam());
    const auto sample = random_bundle_points(m, 8, 7);
    const OracleReport rep = verify_structural_vs_direct(m, sample, 1e-7, 7);
    EXPECT_TRUE(rep.pass());
    for (const auto& c : rep.cases) EXPECT_LT(c.max_residual, 1e-7) << c.name;
    EXPECT_EQ(rep.winning_reading, UReading::PhiV);
}

INSTANTIATE_TEST_SUITE_P(Manifolds, BundleOracle, ::testing::Values("polar-r2", "hyperbolic-r4", "exp-r2", "flat-r2", "warped-r4"));

TEST(Bundle, PlainVReadingLosesWhenCurvatureIsPresent) {
    const ChartManifold m = sasaki::test::warped_definition().build();
    const auto sample = random_bundle_points(m, 6, 3);
    const OracleReport rep = verify_structural_vs_direct(m, sample, 1e-7, 3);
    EXPECT_LT(rep.phi_v_residual, 1e-10);
    EXPECT_GT(rep.plain_v_residual, 1e-3);
}

TEST(Bundle, PhiMetricHasTheLiftedBlockStructure) {
    // Over (d_x, d_v): G_xx = g + K^T (g phi) K, G_xv = K^T (g phi), G_vv = g phi,
    // with K^a_i = Gamma^a_ik v^k.
    for (const char* name : {"polar-r2", "hyperbolic-r4", "exp-r2"}) {
        const ChartManifold m = builtin_manifold(name);
        const int n = m.dim();
        for (const BundlePoint& bp : random_bundle_points(m, 40, 11)) {
            const GeometryAtPoint base = christoffel(m, bp.p);
            const RealTensor phi = values(m.structure_jets(bp.p, 0));
            const RealTensor G = sasaki_phi_metric(m, bp);
            auto gphi = [&](int a, int b) {
                double s = 0.0;
                for (int c = 0; c < n; ++c) s += base.g(a, c) * phi(c, b);
                return s;
            };
            auto K = [&](int a, int i) {
                double s = 0.0;
                for (int k = 0; k < n; ++k) s += base.gamma(a, i, k) * bp.v[static_cast<std::size_t>(k)];
                return s;
            };
            double worst = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double xx = base.g(i, j), xv = 0.0;
                    for (int a = 0; a < n; ++a) {
                        xv += K(a, i) * gphi(a, j);
                        for (int b = 0; b < n; ++b) xx += K(a, i) * gphi(a, b) * K(b, j);
                    }
                    worst = std::max({worst, std::abs(G(i, j) - xx), std::abs(G(i, n + j) - xv), std::abs(G(n + j, i) - xv),
                                      std::abs(G(n + i, n + j) - gphi(i, j))});
                }
            EXPECT_LT(worst, 1e-12) << name;
            // det g^phi = det(g)^2 det(phi)
            EXPECT_NEAR(det(G), base.det_g * base.det_g * det(phi), 1e-10 * std::abs(base.det_g * base.det_g)) << name;
        }
    }
}

TEST(Bundle, LiftsRoundTripAndCarryTheInnerProduct) {
    const ChartManifold m = builtin_manifold("hyperbolic-r4");
    for (const BundlePoint& bp : random_bundle_points(m, 20, 5)) {
        const GeometryAtPoint base = christoffel(m, bp.p);
        const RealTensor phi = values(m.structure_jets(bp.p, 0));
        const RealTensor G = sasaki_phi_metric(m, bp);
        const LiftedVector a = random_lifted(4), b = random_lifted(4);
        const Vec na = lift_to_natural(base.gamma, bp.v, a), nb = lift_to_natural(base.gamma, bp.v, b);
        const LiftedVector back = project_from_natural(base.gamma, bp.v, na);
        EXPECT_LT(sup_norm(back - a), 1e-14);
        double Gab = 0.0;
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j) Gab += na[static_cast<std::size_t>(i)] * G(i, j) * nb[static_cast<std::size_t>(j)];
        EXPECT_NEAR(Gab, bundle_inner(base.g, phi, a, b), 1e-12);
    }
}

TEST(Bundle, EuclideanBaseGivesConstantBlocks) {
    const ChartManifold m = builtin_manifold("flat-r2");
    const BundlePoint bp{{0.4, 0.6}, {0.7, -0.3}};
    const RealTensor G = sasaki_phi_metric(m, bp);
    // block(x, x) = g, block(x, v) = 0, block(v, v) = g phi = antidiag(1, 1)
    const double want[4][4] = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) EXPECT_EQ(G(i, j), want[i][j]);
    const GeometryAtPoint d = direct_bundle_geometry(m, bp);
    EXPECT_EQ(sup_norm(d.gamma), 0.0);
}

TEST(Bundle, CurvatureIsTrilinearAndAntisymmetric) {
    const ChartManifold m = sasaki::test::warped_definition().build();
    const BundlePoint bp = random_bundle_points(m, 1, 9).front();
    const LiftedVector x = random_lifted(4), y = random_lifted(4), z = random_lifted(4), w = random_lifted(4);
    const LiftedVector rxy = structural_curvature(m, bp, x, y, z);
    const LiftedVector ryx = structural_curvature(m, bp, y, x, z);
    EXPECT_LT(sup_norm(rxy + ryx), 1e-12);
    const LiftedVector lin = structural_curvature(m, bp, x + 2.0 * w, y, z);
    const LiftedVector sep = rxy + 2.0 * structural_curvature(m, bp, w, y, z);
    EXPECT_LT(sup_norm(lin - sep), 1e-12);
    // First Bianchi identity on the bundle.
    const LiftedVector cyc = rxy + structural_curvature(m, bp, y, z, x) + structural_curvature(m, bp, z, x, y);
    EXPECT_LT(sup_norm(cyc), 1e-11);
}
