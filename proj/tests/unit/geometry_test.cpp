#include <gtest/gtest.h>

#include <cmath>

#include "sasaki/builtins.hpp"
#include "sasaki/geometry.hpp"
#include "sasaki/sampling.hpp"
#include "sasaki/structure.hpp"
#include "sasaki/variational.hpp"
#include "support.hpp"

using namespace sasaki;
using sasaki::test::uniform;

namespace {

/// Metric delta_ij + small random quadratic entries in four variables.
ChartManifold random_metric_manifold() {
    const std::vector<std::string> c{"a", "b", "c", "d"};
    auto poly = [&](double scale) {
        std::string s;
        char buf[128];
        for (int i = 0; i < 4; ++i) {
            std::snprintf(buf, sizeof buf, " + %.6f*%s + %.6f*%s*%s", scale * uniform(-1, 1), c[i].c_str(), scale * uniform(-1, 1), c[i].c_str(),
                          c[(i + 1) % 4].c_str());
            s += buf;
        }
        return s;
    };
    ExprTable g(4, std::vector<std::string>(4, "0"));
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) {
            g[i][j] = (i == j ? "1" : "0") + poly(i == j ? 0.2 : 0.1);
            g[j][i] = g[i][j];
        }
    ExprTable phi{{"1", "0", "0", "0"}, {"0", "1", "0", "0"}, {"0", "0", "-1", "0"}, {"0", "0", "0", "-1"}};
    return ChartManifold("random-metric", c, {{-0.5, 0.5}, {-0.5, 0.5}, {-0.5, 0.5}, {-0.5, 0.5}}, g, phi);
}

}  // namespace

TEST(Geometry, PolarChristoffelsAreFrozen) {
    const ChartManifold m = builtin_manifold("polar-r2");
    const Vec p{2.0, 0.7};
    const GeometryAtPoint g = christoffel(m, p);
    // r = 0, theta = 1
    EXPECT_NEAR(g.gamma(0, 1, 1), -2.0, 1e-14);
    EXPECT_NEAR(g.gamma(1, 0, 1), 0.5, 1e-14);
    EXPECT_NEAR(g.gamma(1, 1, 0), 0.5, 1e-14);
    EXPECT_NEAR(g.gamma(0, 0, 0), 0.0, 1e-14);
    EXPECT_NEAR(g.gamma(1, 1, 1), 0.0, 1e-14);
    EXPECT_NEAR(g.det_g, 4.0, 1e-14);
    const GeometryAtPoint r = curvature(m, p);
    for (double v : r.curvature.data()) EXPECT_NEAR(v, 0.0, 1e-13);
}

TEST(Geometry, EuclideanIsFlat) {
    const ChartManifold m = builtin_manifold("flat-r2");
    const GeometryAtPoint g = curvature_cov_deriv(m, Vec{0.3, 0.6});
    EXPECT_EQ(sup_norm(g.gamma), 0.0);
    EXPECT_EQ(sup_norm(g.curvature), 0.0);
    EXPECT_EQ(sup_norm(g.nabla_R), 0.0);
}

TEST(Geometry, HyperbolicPlaneHasCurvatureMinusOne) {
    // g(R(d_x, d_y) d_y, d_x) = K (g_xx g_yy) with K = -1 in the (x, y) block.
    const ChartManifold m = builtin_manifold("hyperbolic-r4");
    const Vec p{0.4, 0.2, 0.7, 0.1};
    const GeometryAtPoint g = curvature_cov_deriv(m, p);
    EXPECT_NEAR(g.curvature(0, 1, 0, 1), -std::exp(-2 * 0.4), 1e-13);
    EXPECT_NEAR(g.curvature(2, 3, 2, 3), -std::exp(-2 * 0.7), 1e-13);
    EXPECT_NEAR(g.curvature(0, 2, 0, 2), 0.0, 1e-13);
    EXPECT_LT(sup_norm(g.nabla_R), 1e-13);  // locally symmetric
}

TEST(Geometry, BianchiIdentitiesOnRandomMetrics) {
    for (int trial = 0; trial < 10; ++trial) {
        const ChartManifold m = random_metric_manifold();
        for (const Vec& p : random_points(m.domain(), 3, 100 + trial)) {
            const GeometryAtPoint g = curvature_cov_deriv(m, p);
            double first = 0.0, second = 0.0, antisym = 0.0;
            for (int l = 0; l < 4; ++l)
                for (int k = 0; k < 4; ++k)
                    for (int i = 0; i < 4; ++i)
                        for (int j = 0; j < 4; ++j) {
                            first = std::max(first, std::abs(g.curvature(l, k, i, j) + g.curvature(l, i, j, k) + g.curvature(l, j, k, i)));
                            antisym = std::max(antisym, std::abs(g.curvature(l, k, i, j) + g.curvature(l, k, j, i)));
                            for (int q = 0; q < 4; ++q)
                                second = std::max(second, std::abs(g.nabla_R(l, q, k, i, j) + g.nabla_R(l, i, k, j, q) + g.nabla_R(l, j, k, q, i)));
                        }
            EXPECT_LT(first, 1e-12);
            EXPECT_LT(antisym, 1e-12);
            EXPECT_LT(second, 1e-9);
        }
    }
}

TEST(Geometry, GradientAndLaplacianOnEuclideanPlane) {
    const ChartManifold m = builtin_manifold("flat-r2");
    const Expr f = m.parse("x^2 + y^2");
    const GradLaplace gl = grad_and_laplace(m, f, Vec{0.3, -0.2}, LaplacianSign::PlusTrace);
    EXPECT_NEAR(gl.grad[0], 0.6, 1e-14);
    EXPECT_NEAR(gl.grad[1], -0.4, 1e-14);
    EXPECT_NEAR(gl.laplacian, 4.0, 1e-13);
    EXPECT_NEAR(grad_and_laplace(m, f, Vec{0.3, -0.2}, LaplacianSign::MinusTrace).laplacian, -4.0, 1e-13);
}

TEST(Geometry, PolarLaplacianOfR) {
    // Delta r = 1/r on the polar plane with the +trace convention.
    const ChartManifold m = builtin_manifold("polar-r2");
    EXPECT_NEAR(trace_hessian(m, m.parse("r"), Vec{2.0, 0.5}), 0.5, 1e-14);
    EXPECT_EQ(resolved_laplacian_sign(), LaplacianSign::PlusTrace);
}

TEST(Geometry, SingularMetricIsReported) {
    const ChartManifold m("degenerate", {"x", "y"}, {{0, 1}, {0, 1}}, {{"1", "1"}, {"1", "1"}}, {{"1", "0"}, {"0", "-1"}});
    EXPECT_THROW(christoffel(m, Vec{0.5, 0.5}), SingularMetricError);
}

TEST(Structure, BuiltinsSatisfyTheAxioms) {
    for (const auto& name : builtin_names()) {
        const ChartManifold m = builtin_manifold(name);
        const auto pts = grid_points(m.domain(), m.dim() == 2 ? 5 : 3);
        const StructureReport rep = validate_structure(m, pts, 1e-10);
        EXPECT_TRUE(rep.all_pass()) << name;
        for (const auto& c : rep.checks)
            if (!c.margin) EXPECT_LT(c.value, 1e-10) << name << " " << c.name;
    }
}

TEST(Structure, BadStructureNamesTheFailingAxiom) {
    ManifoldDefinition d = builtin_definition("flat-r2");
    d.structure = {{"1.1", "0"}, {"0", "-1"}};
    const ChartManifold m = d.build();
    const auto pts = grid_points(m.domain(), 3);
    const StructureReport rep = validate_structure(m, pts, 1e-10);
    EXPECT_FALSE(rep.all_pass());
    ASSERT_NE(rep.find("phi_squared_identity"), nullptr);
    EXPECT_FALSE(rep.find("phi_squared_identity")->pass);
    EXPECT_NEAR(rep.find("phi_squared_identity")->value, 0.21, 1e-12);
}

TEST(Structure, NonParallelStructureIsCaught) {
    // phi = diag(1, -1) on the polar chart is not parallel.
    ManifoldDefinition d = builtin_definition("polar-r2");
    d.structure = {{"1", "0"}, {"0", "-1"}};
    const ChartManifold m = d.build();
    const auto pts = grid_points(m.domain(), 3);
    const StructureReport rep = validate_structure(m, pts, 1e-10);
    EXPECT_TRUE(rep.find("phi_squared_identity")->pass);
    EXPECT_FALSE(rep.find("parallel_structure")->pass);
}

TEST(Structure, WarpedTestManifoldIsParaKaehlerNorden) {
    const ChartManifold m = sasaki::test::warped_definition().build();
    const auto pts = grid_points(m.domain(), 2);
    EXPECT_TRUE(validate_structure(m, pts, 1e-10).all_pass());
    EXPECT_GT(sup_norm(curvature_cov_deriv(m, pts[3]).nabla_R), 1e-3);
}
