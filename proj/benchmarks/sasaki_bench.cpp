#include <benchmark/benchmark.h>

#include "sasaki/bundle.hpp"
#include "sasaki/builtins.hpp"
#include "sasaki/functionals.hpp"
#include "sasaki/geometry.hpp"
#include "sasaki/jet.hpp"
#include "sasaki/variational.hpp"

using namespace sasaki;

static void JetProduct(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    const int order = static_cast<int>(state.range(1));
    Jet a = Jet::constant(dim, order, 1.5), b = Jet::constant(dim, order, 0.5);
    for (int v = 0; v < dim; ++v) {
        a += Jet::variable(dim, order, v, 0.3);
        b += 0.5 * Jet::variable(dim, order, v, -0.2);
    }
    for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(JetProduct)->Args({2, 4})->Args({4, 4})->Args({8, 2})->Args({8, 3});

static void JetExp(benchmark::State& state) {
    Jet a = Jet::variable(4, 4, 0, 0.3) * Jet::variable(4, 4, 1, 0.2);
    for (auto _ : state) benchmark::DoNotOptimize(exp(a));
}
BENCHMARK(JetExp);

static void CurvatureAtPoint(benchmark::State& state) {
    const ChartManifold m = builtin_manifold(state.range(0) == 2 ? "polar-r2" : "hyperbolic-r4");
    const Vec p = m.dim() == 2 ? Vec{1.5, 0.7} : Vec{0.3, 0.4, 0.5, 0.6};
    for (auto _ : state) benchmark::DoNotOptimize(curvature_cov_deriv(m, p));
}
BENCHMARK(CurvatureAtPoint)->Arg(2)->Arg(4);

static void Bitension(benchmark::State& state) {
    const ChartManifold m = builtin_manifold(state.range(0) == 2 ? "polar-r2" : "hyperbolic-r4");
    std::vector<std::string> c(static_cast<std::size_t>(m.dim()), "0");
    c[0] = m.dim() == 2 ? "r^3" : "x^2 + 1";
    const VectorFieldSpec xi = VectorFieldSpec::parse(m, c, FrameTag::Orthonormal);
    const Vec p = m.dim() == 2 ? Vec{1.5, 0.7} : Vec{0.3, 0.4, 0.5, 0.6};
    for (auto _ : state) benchmark::DoNotOptimize(tension_report(m, xi, p, 1.0, 1.0));
}
BENCHMARK(Bitension)->Arg(2)->Arg(4);

static void MapTensionOracle(benchmark::State& state) {
    const ChartManifold m = builtin_manifold("polar-r2");
    const VectorFieldSpec xi = VectorFieldSpec::parse(m, {"r^3", "0"}, FrameTag::Orthonormal);
    for (auto _ : state) benchmark::DoNotOptimize(map_tension_oracle(m, xi, Vec{1.5, 0.7}));
}
BENCHMARK(MapTensionOracle);

static void DirectBundleGeometry(benchmark::State& state) {
    const ChartManifold m = builtin_manifold(state.range(0) == 2 ? "polar-r2" : "hyperbolic-r4");
    const BundlePoint bp = random_bundle_points(m, 1, 3).front();
    for (auto _ : state) benchmark::DoNotOptimize(direct_bundle_geometry(m, bp));
}
BENCHMARK(DirectBundleGeometry)->Arg(2)->Arg(4);

static void EnergyQuadrature(benchmark::State& state) {
    const ChartManifold m = builtin_manifold("polar-r2");
    const VectorFieldSpec xi = VectorFieldSpec::parse(m, {"r^2", "sin(theta)"}, FrameTag::Orthonormal);
    const QuadratureSpec q{{{1.0, 2.0}, {0.2, 1.2}}, static_cast<int>(state.range(0))};
    for (auto _ : state) benchmark::DoNotOptimize(energy_functionals(m, xi, q, 1.0, 1.0));
}
BENCHMARK(EnergyQuadrature)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
