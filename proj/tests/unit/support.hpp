#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "sasaki/builtins.hpp"
#include "sasaki/tensor.hpp"

namespace sasaki::test {

inline std::mt19937_64& rng() {
    static std::mt19937_64 g(20240611);
    return g;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

/// Central difference of order 1 with one Richardson step (error O(h^4)).
inline double richardson_d1(const std::function<double(double)>& f, double x, double h = 1e-3) {
    auto d = [&](double s) { return (f(x + s) - f(x - s)) / (2 * s); };
    return (4 * d(h / 2) - d(h)) / 3;
}

inline double richardson_d2(const std::function<double(double)>& f, double x, double h = 1e-2) {
    auto d = [&](double s) { return (f(x + s) - 2 * f(x) + f(x - s)) / (s * s); };
    return (4 * d(h / 2) - d(h)) / 3;
}

/// dx^2 + e^{x^2} dy^2 + (1 + z^2/4) dz^2 + cosh^2 z dt^2 with phi = diag(1, 1, -1, -1):
/// para-Kaehler-Norden with non-parallel curvature.
inline ManifoldDefinition warped_definition() {
    ManifoldDefinition d;
    d.name = "warped-r4";
    d.coords = {"x", "y", "z", "t"};
    d.domain = {{-0.5, 0.8}, {0.0, 1.0}, {-0.6, 0.7}, {0.0, 1.0}};
    d.metric = {{"1", "0", "0", "0"}, {"0", "exp(x^2)", "0", "0"}, {"0", "0", "1 + z^2/4", "0"}, {"0", "0", "0", "cosh(z)^2"}};
    d.structure = {{"1", "0", "0", "0"}, {"0", "1", "0", "0"}, {"0", "0", "-1", "0"}, {"0", "0", "0", "-1"}};
    return d;
}

inline double max_abs_diff(const Vec& a, const Vec& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace sasaki::test
