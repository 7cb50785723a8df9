#include <gtest/gtest.h>

#include <cmath>

#include "sasaki/builtins.hpp"
#include "sasaki/functionals.hpp"
#include "sasaki/geometry.hpp"
#include "sasaki/sampling.hpp"
#include "sasaki/variational.hpp"
#include "support.hpp"

using namespace sasaki;
using sasaki::test::uniform;

namespace {

VectorFieldSpec along_e1(const ChartManifold& m, const std::string& f) {
    std::vector<std::string> c(static_cast<std::size_t>(m.dim()), "0");
    c[0] = f;
    return VectorFieldSpec::parse(m, c, FrameTag::Orthonormal, f);
}

std::string random_poly(const std::vector<std::string>& v) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%.4f + %.4f*%s + %.4f*%s^2 + %.4f*%s*%s + %.4f*%s^3", uniform(-1, 1), uniform(-1, 1), v[0].c_str(),
                  uniform(-1, 1), v[1].c_str(), uniform(-1, 1), v[0].c_str(), v[1].c_str(), uniform(-0.5, 0.5), v[1].c_str());
    return buf;
}

}  // namespace

TEST(Tension, MapOracleAgreesWithClosedForms) {
    struct Case {
        const char* manifold;
        std::vector<std::string> components;
    };
    const std::vector<Case> cases{{"hyperbolic-r4", {"x^2 + 1", "0", "0", "0"}},
                                  {"hyperbolic-r4", {"sqrt(3/8)*sech(x/sqrt(2))", "0", "0", "0"}},
                                  {"hyperbolic-r4", {"z", "x*y", "1", "t^2"}},
                                  {"polar-r2", {"r^3", "sin(theta)"}},
                                  {"exp-r2", {"exp(2*x)", "x*y"}}};
    for (const auto& c : cases) {
        const ChartManifold m = builtin_manifold(c.manifold);
        const VectorFieldSpec xi = VectorFieldSpec::parse(m, c.components, FrameTag::Orthonormal);
        for (const Vec& p : random_points(inset(m.domain(), 0.1), 2, 4)) {
            const TensionReport t = tension_report(m, xi, p);
            const MapTension o = map_tension_oracle(m, xi, p);
            const double scale = 1.0 + sup_norm(t.tau2);
            EXPECT_LT(sup_norm(o.tau - t.tau), 1e-10) << c.manifold;
            EXPECT_LT(sup_norm(o.tau2 - t.tau2) / scale, 1e-9) << c.manifold;
        }
    }
}

TEST(Tension, TraceBlockOfFE1OnHyperbolicIsMinusTwoFCubed) {
    const ChartManifold m = builtin_manifold("hyperbolic-r4");
    for (const char* f : {"1", "x^2 + 1", "sqrt(3/8)*sech(x/sqrt(2))"}) {
        const VectorFieldSpec xi = along_e1(m, f);
        for (const Vec& p : grid_points(m.domain(), 2)) {
            const double fx = m.parse(f).eval(p);
            const Vec tt = natural_to_frame(m, p, tension_report(m, xi, p).trace_term);
            EXPECT_NEAR(tt[0], -2 * fx * fx * fx, 1e-10) << f;
            EXPECT_NEAR(sup_norm(Vec(tt.begin() + 1, tt.end())), 0.0, 1e-12);
        }
    }
}

TEST(Tension, TraceSignConfirmedByFirstVariationOfTheBienergy) {
    // The energy side uses only S and lap; a flipped trace block would move
    // the pairing integral by 4 int bump.
    const ChartManifold m = builtin_manifold("hyperbolic-r4");
    const VectorFieldSpec xi = along_e1(m, "1");
    const VariationSpec var{along_e1(m, "1"), default_bump(m, m.domain()), m.domain(), {1e-2, 2e-2}};
    const VariationReport r = first_variation_check(m, xi, var, 0.0, 1.0, 6);
    EXPECT_LT(r.mismatch, 1e-6);
    EXPECT_GT(std::abs(r.lhs), 1e-2);
}

TEST(Tension, SesquiIsTheLinearCombination) {
    for (const char* name : {"polar-r2", "exp-r2", "hyperbolic-r4"}) {
        const ChartManifold m = builtin_manifold(name);
        for (int trial = 0; trial < 4; ++trial) {
            std::vector<std::string> comps;
            for (int i = 0; i < m.dim(); ++i) comps.push_back(random_poly(m.coords()));
            const VectorFieldSpec xi = VectorFieldSpec::parse(m, comps);
            const double d1 = uniform(-2, 2), d2 = uniform(-2, 2);
            const Vec p = random_points(m.domain(), 1, 50 + trial).front();
            const TensionReport t = tension_report(m, xi, p, d1, d2);
            const LiftedVector combo = d1 * t.tau + d2 * t.tau2;
            EXPECT_LT(sup_norm(t.sesqui - combo), 1e-9 * (1 + sup_norm(combo))) << name;
        }
    }
}

TEST(Tension, ProductRulesHold) {
    for (const char* name : {"polar-r2", "exp-r2", "hyperbolic-r4"}) {
        const ChartManifold m = builtin_manifold(name);
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<std::string> comps;
            for (int i = 0; i < m.dim(); ++i) comps.push_back(random_poly(m.coords()));
            const VectorFieldSpec xi = VectorFieldSpec::parse(m, comps);
            const Expr f = m.parse(random_poly(m.coords()));
            const Vec p = random_points(m.domain(), 1, 80 + trial).front();
            const ProductRuleResidual r = product_rule_check(m, f, xi, p, LaplacianSign::PlusTrace);
            EXPECT_LT(r.laplacian, 1e-9) << name;
            EXPECT_LT(r.s_scaling, 1e-9) << name;
        }
    }
}

TEST(Classify, PolarFamilies) {
    const ChartManifold m = builtin_manifold("polar-r2");
    const auto pts = grid_points(m.domain(), 5);
    const ClassificationReport r3 = classify(m, along_e1(m, "r^3"), pts, 0, 1, 1e-8);
    EXPECT_FALSE(r3.flag("harmonic_vf"));
    EXPECT_TRUE(r3.flag("biharmonic_vf"));
    EXPECT_TRUE(r3.flag("biharmonic_map"));
    const ClassificationReport h = classify(m, along_e1(m, "2/r + 3*r"), pts, 0, 1, 1e-8);
    EXPECT_TRUE(h.flag("harmonic_vf"));
    EXPECT_TRUE(h.flag("harmonic_map"));
    EXPECT_FALSE(h.flag("parallel"));
    const ClassificationReport x3 =
        classify(m, VectorFieldSpec::parse(m, {"sin(theta)", "cos(theta)"}, FrameTag::Orthonormal), pts, 1, 1, 1e-10);
    for (const auto& c : x3.criteria) EXPECT_TRUE(c.flag) << c.name;
}

TEST(Classify, GoldenExponentOnHyperbolicIsHarmonicFieldOnly) {
    const ChartManifold m = builtin_manifold("hyperbolic-r4");
    const auto pts = grid_points(m.domain(), 2);
    const ClassificationReport r = classify(m, along_e1(m, "exp((1-sqrt(5))*x/2)"), pts, 0, 1, 1e-9);
    EXPECT_TRUE(r.flag("harmonic_vf"));
    EXPECT_FALSE(r.flag("harmonic_map"));
    EXPECT_FALSE(r.flag("biharmonic_vf"));
}

TEST(Classify, VerticalBitensionOfFE1SolvesTheDerivedOde) {
    // tau2^V = -(f'''' - 2f''' - f'' + 2f' + f + 2f^3) e1
    const ChartManifold m = builtin_manifold("hyperbolic-r4");
    const std::string f = "sin(x) + x^2";
    const VectorFieldSpec xi = along_e1(m, f);
    for (const Vec& p : grid_points(m.domain(), 2)) {
        const double x = p[0];
        const double d0 = std::sin(x) + x * x, d1 = std::cos(x) + 2 * x, d2 = -std::sin(x) + 2, d3 = -std::cos(x), d4 = std::sin(x);
        const double want = -(d4 - 2 * d3 - d2 + 2 * d1 + d0 + 2 * d0 * d0 * d0);
        EXPECT_NEAR(natural_to_frame(m, p, tension_report(m, xi, p).tau2.w)[0], want, 1e-9);
    }
}

TEST(Conventions, AreReported) {
    const Conventions c = conventions();
    EXPECT_NE(c.curvature.find("nabla_X nabla_Y"), std::string::npos);
    EXPECT_NE(c.laplacian.find("+tr"), std::string::npos);
    EXPECT_FALSE(c.bundle_reading.empty());
}
