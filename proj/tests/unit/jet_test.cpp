#include <gtest/gtest.h>

#include <cmath>

#include "sasaki/expr.hpp"
#include "sasaki/jet.hpp"
#include "support.hpp"

using namespace sasaki;
using sasaki::test::uniform;

namespace {

double factorial(int k) { return k <= 1 ? 1.0 : k * factorial(k - 1); }

Jet var1(double at, int order = 4) { return Jet::variable(1, order, 0, at); }

}  // namespace

TEST(JetSpace, GradedLexLayoutIn2D) {
    const auto& s = JetSpace::get(2);
    EXPECT_EQ(s.size(0), 1u);
    EXPECT_EQ(s.size(2), 6u);
    EXPECT_EQ(s.size(4), 15u);
    const std::vector<std::vector<int>> want{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
    for (std::size_t k = 0; k < want.size(); ++k) {
        const auto mi = s.multi_index(k);
        EXPECT_EQ(std::vector<int>(mi.begin(), mi.end()), want[k]) << k;
    }
}

TEST(Jet, SerializeFollowsGradedLex) {
    const std::vector<std::string> xy{"x", "y"};
    const Expr f = parse_expr("x + 2*y + 3*x^2 + 4*x*y + 5*y^2", xy);
    const double at[2] = {0, 0};
    const auto c = serialize(f.eval_jet(at, 2));
    EXPECT_EQ(c, (std::vector<double>{0, 1, 2, 3, 4, 5}));
}

TEST(Jet, OneDimensionalCoefficientsAreScaledDerivatives) {
    // exp(2x): f^(k) = 2^k e^{2x}
    const double x = 0.3;
    const Jet j = exp(2.0 * var1(x));
    for (int k = 0; k <= 4; ++k) EXPECT_NEAR(j.coeff(static_cast<std::size_t>(k)) * factorial(k), std::pow(2, k) * std::exp(2 * x), 1e-12);
}

TEST(Jet, SechDerivativesMatchHandFormulas) {
    for (double x : {-1.7, -0.2, 0.0, 0.9, 2.5}) {
        const Jet j = sech(var1(x));
        const double s = 1 / std::cosh(x), t = std::tanh(x);
        const double want[5] = {s, -s * t, s * t * t - s * s * s, -s * t * t * t + 5 * s * s * s * t,
                                s * std::pow(t, 4) - 18 * std::pow(s, 3) * t * t + 5 * std::pow(s, 5)};
        for (int k = 0; k <= 4; ++k) EXPECT_NEAR(j.coeff(static_cast<std::size_t>(k)) * factorial(k), want[k], 1e-13) << "x=" << x << " k=" << k;
    }
}

TEST(Jet, ElementaryFunctionsMatchRichardsonDifferences) {
    const std::vector<std::string> x{"x"};
    for (const char* text : {"sin(x)*exp(x)", "ln(1 + x^2)", "sqrt(2 + cos(x))", "tan(x/3)", "sinh(x)/cosh(x)^2", "x^2.5", "sech(x/sqrt(2))"}) {
        const Expr f = parse_expr(text, x);
        auto eval = [&](double s) {
            const double p[1] = {s};
            return f.eval(p);
        };
        for (double at : {0.4, 1.1}) {
            const double p[1] = {at};
            const Jet j = f.eval_jet(p, 2);
            EXPECT_NEAR(j.coeff(1), sasaki::test::richardson_d1(eval, at), 1e-9) << text;
            EXPECT_NEAR(2 * j.coeff(2), sasaki::test::richardson_d2(eval, at), 1e-6) << text;
        }
    }
}

TEST(Jet, MixedPartialsMatchDifferences) {
    const std::vector<std::string> xy{"x", "y"};
    const Expr f = parse_expr("exp(x*y) + sin(x - 2*y)", xy);
    const double p[2] = {0.3, -0.4};
    const Jet j = f.eval_jet(p, 2);
    const int a11[2] = {1, 1};
    const double h = 1e-4;
    auto F = [&](double a, double b) {
        const double q[2] = {a, b};
        return f.eval(q);
    };
    const double fd = (F(p[0] + h, p[1] + h) - F(p[0] + h, p[1] - h) - F(p[0] - h, p[1] + h) + F(p[0] - h, p[1] - h)) / (4 * h * h);
    EXPECT_NEAR(j.derivative(a11), fd, 1e-6);
}

TEST(Jet, AlgebraicIdentitiesHoldToFullOrder) {
    for (int trial = 0; trial < 50; ++trial) {
        const int dim = 3;
        Jet a = Jet::constant(dim, 4, uniform(0.5, 2.0));
        Jet b = Jet::constant(dim, 4, uniform(0.5, 2.0));
        for (int v = 0; v < dim; ++v) {
            a += uniform(-1, 1) * Jet::variable(dim, 4, v, 0.0) * Jet::variable(dim, 4, (v + 1) % dim, 0.0);
            b += uniform(-1, 1) * Jet::variable(dim, 4, v, 0.0);
        }
        auto close = [](const Jet& x, const Jet& y) {
            double m = 0.0;
            for (std::size_t k = 0; k < x.coeffs().size(); ++k) m = std::max(m, std::abs(x.coeff(k) - y.coeff(k)));
            return m;
        };
        EXPECT_LT(close((a / b) * b, a), 1e-12);
        EXPECT_LT(close(log(exp(a)), a), 1e-12);
        EXPECT_LT(close(sqrt(a) * sqrt(a), a), 1e-12);
        EXPECT_LT(close(pow(a, 3), a * a * a), 1e-12);
        EXPECT_LT(close(sin(a) * sin(a) + cos(a) * cos(a), Jet::constant(dim, 4, 1.0)), 1e-12);
        EXPECT_LT(close(cosh(a) * sech(a), Jet::constant(dim, 4, 1.0)), 1e-12);
        EXPECT_LT(close(pow(a, 0.5), sqrt(a)), 1e-12);
    }
}

TEST(Jet, TruncationIsAPrefix) {
    const std::vector<std::string> xy{"x", "y"};
    const Expr f = parse_expr("exp(x)*cos(y) + x^3*y", xy);
    const double p[2] = {0.2, 0.7};
    const Jet j4 = f.eval_jet(p, 4), j2 = f.eval_jet(p, 2);
    const Jet t = j4.truncated(2);
    ASSERT_EQ(t.coeffs().size(), j2.coeffs().size());
    for (std::size_t k = 0; k < t.coeffs().size(); ++k) EXPECT_NEAR(t.coeff(k), j2.coeff(k), 1e-14);
}

TEST(Jet, PartialLowersOrder) {
    const std::vector<std::string> xy{"x", "y"};
    const double p[2] = {0.5, -0.3};
    const Jet dfdx = parse_expr("x^2*sin(y)", xy).eval_jet(p, 3).partial(0);
    const Jet want = parse_expr("2*x*sin(y)", xy).eval_jet(p, 2);
    EXPECT_EQ(dfdx.order(), 2);
    for (std::size_t k = 0; k < want.coeffs().size(); ++k) EXPECT_NEAR(dfdx.coeff(k), want.coeff(k), 1e-14);
}

TEST(Jet, SubstitutionComposesJets) {
    // outer(u, v) = u^2 v + sin(u), inner u = x + y^2, v = exp(x)
    const std::vector<std::string> uv{"u", "v"}, xy{"x", "y"};
    const double p[2] = {0.3, 0.4};
    const Expr iu = parse_expr("x + y^2", xy), iv = parse_expr("exp(x)", xy);
    const std::vector<Jet> inner{iu.eval_jet(p, 4), iv.eval_jet(p, 4)};
    const double q[2] = {inner[0].value(), inner[1].value()};
    const Jet outer = parse_expr("u^2*v + sin(u)", uv).eval_jet(q, 4);
    const Jet got = Substitution(inner, 4).apply(outer);
    const Jet want = parse_expr("(x + y^2)^2*exp(x) + sin(x + y^2)", xy).eval_jet(p, 4);
    for (std::size_t k = 0; k < want.coeffs().size(); ++k) EXPECT_NEAR(got.coeff(k), want.coeff(k), 1e-12) << k;
}

TEST(Jet, DomainErrorsThrow) {
    EXPECT_THROW(log(Jet::constant(1, 2, -1.0)), std::domain_error);
    EXPECT_THROW(sqrt(Jet::constant(1, 2, -1.0)), std::domain_error);
    EXPECT_THROW(reciprocal(Jet::constant(1, 2, 0.0)), std::domain_error);
}

TEST(Expr, ParsesPrecedenceAndConstants) {
    const std::vector<std::string> x{"x"};
    const double p[1] = {2.0};
    EXPECT_DOUBLE_EQ(parse_expr("-2^2", x).eval(p), -4.0);
    EXPECT_DOUBLE_EQ(parse_expr("2^3^2", x).eval(p), 512.0);
    EXPECT_DOUBLE_EQ(parse_expr("1 + 2*x/4 - x", x).eval(p), 0.0);
    EXPECT_NEAR(parse_expr("e^x * exp(-x) + cos(pi)", x).eval(p), 0.0, 1e-15);
    EXPECT_NEAR(parse_expr("log(e)", x).eval(p), 1.0, 1e-15);
}

TEST(Expr, ReportsErrors) {
    const std::vector<std::string> x{"x"};
    EXPECT_THROW(parse_expr("x +", x), ParseError);
    EXPECT_THROW(parse_expr("(x", x), ParseError);
    EXPECT_THROW(parse_expr("x + y", x), UndeclaredSymbolError);
    const double p[1] = {-1.0};
    EXPECT_THROW(parse_expr("ln(x)", x).eval(p), DomainError);
    try {
        parse_expr("x * * 2", x);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.offset(), 4u);
    }
}

TEST(Expr, ParametersAreSubstituted) {
    const std::vector<std::string> x{"x"}, k{"k"};
    const Expr f = parse_expr("k*x^2", x, k);
    const double p[1] = {3.0}, kv[1] = {0.5};
    EXPECT_DOUBLE_EQ(f.eval(p, kv), 4.5);
}
