#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "sasaki/builtins.hpp"
#include "sasaki/functionals.hpp"
#include "support.hpp"

using namespace sasaki;

namespace {

const std::vector<Interval> kPolarBox{{1.0, 2.0}, {0.2, 1.2}};

VectorFieldSpec frame_field(const ChartManifold& m, std::vector<std::string> c) {
    return VectorFieldSpec::parse(m, c, FrameTag::Orthonormal);
}

}  // namespace

TEST(Quadrature, IntegratesPolynomialsExactly) {
    const QuadratureRule q = gauss_legendre_box({{{0.0, 2.0}, {-1.0, 1.0}}, 4});
    ASSERT_EQ(q.nodes.size(), 16u);
    double s = 0.0;
    for (std::size_t k = 0; k < q.nodes.size(); ++k) {
        const double x = q.nodes[k][0], y = q.nodes[k][1];
        s += q.weights[k] * (std::pow(x, 7) + x * y * y + std::pow(y, 6));
    }
    // int_0^2 x^7 = 32 (times 2), int x y^2 = 2 * 2/3, int y^6 = 2/7 (times 2)
    EXPECT_NEAR(s, 64.0 + 4.0 / 3.0 + 4.0 / 7.0, 1e-12);
}

TEST(Quadrature, PairwiseSumIsOrderStable) {
    std::vector<double> v(1000);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 / static_cast<double>(i + 1);
    EXPECT_NEAR(pairwise_sum(v), std::accumulate(v.begin(), v.end(), 0.0), 1e-12);
    EXPECT_EQ(pairwise_sum(std::vector<double>{}), 0.0);
}

TEST(Energies, ParallelFieldHasEnergyEqualToVolume) {
    const ChartManifold m = builtin_manifold("polar-r2");
    const Energies e = energy_functionals(m, frame_field(m, {"sin(theta)", "cos(theta)"}), {kPolarBox, 16}, 1, 1);
    EXPECT_NEAR(e.volume, 1.5, 1e-13);  // int r dr dtheta over [1,2]x[0.2,1.2]
    EXPECT_NEAR(e.E, e.volume, 1e-13);
    EXPECT_NEAR(e.E2, 0.0, 1e-20);
}

TEST(Energies, LinearCombinationIdentity) {
    const ChartManifold m = builtin_manifold("polar-r2");
    const VectorFieldSpec xi = frame_field(m, {"r^2", "r*theta"});
    for (auto [d1, d2] : std::vector<std::pair<double, double>>{{1, 0}, {0, 1}, {1, 1}, {-0.5, 2}}) {
        const Energies e = energy_functionals(m, xi, {kPolarBox, 12}, d1, d2);
        EXPECT_NEAR(e.E_delta, 2 * d1 * e.E + 2 * d2 * e.E2, 1e-12 * (1 + std::abs(e.E_delta)));
    }
}

TEST(Energies, ConvergeUnderRefinement) {
    const ChartManifold m = builtin_manifold("exp-r2");
    const EnergyReport r = energy_report(m, frame_field(m, {"sin(3*x)", "y^2"}), {m.domain(), 12}, 1, 1);
    EXPECT_LT(r.max_rel_change, 1e-8);
    EXPECT_TRUE(r.warnings.empty());
    // Too coarse a rule is flagged.
    const EnergyReport c = energy_report(m, frame_field(m, {"sin(9*x)*exp(3*y)", "y^2"}), {m.domain(), 4}, 1, 1);
    EXPECT_GT(c.max_rel_change, 1e-4);
    EXPECT_FALSE(c.warnings.empty());
}

TEST(Energies, HyperbolicE1HasBienergyEqualToVolume) {
    // |tau|^2 = |S|^2 + g(lap, phi lap) = 1 + 1 for xi = e1, so E2 = volume.
    const ChartManifold m = builtin_manifold("hyperbolic-r4");
    const Energies e = energy_functionals(m, frame_field(m, {"1", "0", "0", "0"}), {m.domain(), 4}, 0, 1);
    EXPECT_NEAR(e.E2, e.volume, 1e-12);
    EXPECT_NEAR(e.volume, std::pow((1 - std::exp(-1.0)), 2), 1e-9);  // 4-point rule
}

TEST(Variation, BumpVanishesOnTheBoundary) {
    const ChartManifold m = builtin_manifold("polar-r2");
    const VariationSpec var{frame_field(m, {"1", "r"}), default_bump(m, kPolarBox), kPolarBox, {1e-2, 2e-2}};
    EXPECT_EQ(boundary_leakage(m, var), 0.0);
    EXPECT_NEAR(var.bump.eval(Vec{1.5, 0.7}), 1.0, 1e-15);
}

class FirstVariation : public ::testing::TestWithParam<std::pair<double, double>> {};

TEST_P(FirstVariation, DerivativeMatchesTensionPairing) {
    const auto [d1, d2] = GetParam();
    const ChartManifold m = builtin_manifold("polar-r2");
    const VectorFieldSpec xi = frame_field(m, {"r^2", "sin(theta)"});
    const VariationSpec var{VectorFieldSpec::parse(m, {"1 + r*theta", "r - theta^2"}), default_bump(m, kPolarBox), kPolarBox, {1e-2, 2e-2}};
    const VariationReport r = first_variation_check(m, xi, var, d1, d2, 16);
    EXPECT_LT(r.mismatch, 1e-10);
    EXPECT_NEAR(r.rhs, r.rhs_phi_form, 1e-12 * (1 + std::abs(r.rhs)));
    EXPECT_EQ(r.bienergy_normalization, "single");
}

INSTANTIATE_TEST_SUITE_P(Deltas, FirstVariation,
                         ::testing::Values(std::pair{1.0, 0.0}, std::pair{0.0, 1.0}, std::pair{1.0, 1.0}, std::pair{2.0, -0.5}));

TEST(Variation, CriticalFieldsHaveZeroDerivative) {
    const ChartManifold m = builtin_manifold("polar-r2");
    const VariationSpec var{VectorFieldSpec::parse(m, {"1 + r*theta", "r - theta^2"}), default_bump(m, kPolarBox), kPolarBox, {1e-2, 2e-2}};
    const VariationReport h = first_variation_check(m, frame_field(m, {"2/r + r", "0"}), var, 1, 1, 16);
    EXPECT_LT(std::abs(h.lhs), 1e-6);
    const VariationReport p = first_variation_check(m, frame_field(m, {"sin(theta)", "cos(theta)"}), var, 1, 1, 16);
    EXPECT_LT(std::abs(p.lhs), 1e-6);
}

TEST(Energies, AreAdditiveOverSubBoxes) {
    const ChartManifold m = builtin_manifold("polar-r2");
    const VectorFieldSpec xi = frame_field(m, {"r^2", "r*theta"});
    auto e = [&](const std::vector<Interval>& box) { return energy_functionals(m, xi, {box, 16}, 1, 1); };
    const Energies whole = e(kPolarBox), lo = e({{1.0, 1.4}, {0.2, 1.2}}), hi = e({{1.4, 2.0}, {0.2, 1.2}});
    EXPECT_NEAR(lo.E + hi.E, whole.E, 1e-12 * whole.E);
    EXPECT_NEAR(lo.E2 + hi.E2, whole.E2, 1e-12 * std::abs(whole.E2));
}
