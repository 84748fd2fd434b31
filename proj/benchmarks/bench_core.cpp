#include <benchmark/benchmark.h>

#include <numbers>

#include "flowshoot/expr.hpp"
#include "flowshoot/flow.hpp"
#include "flowshoot/pmp.hpp"
#include "flowshoot/shooting.hpp"

using namespace flowshoot;

namespace {

Scenario vortex_sphere() {
    Scenario sc;
    sc.surface = Surface::sphere();
    sc.flow = builtin_vortex();
    sc.start = {0.6, 0.6, 0.4};
    sc.target = {-0.6, -0.6, 0};
    sc.integration.t_max = 3.0;
    return sc;
}

void BM_ExpressionValue(benchmark::State& state) {
    const FlowField f = expression_flow(parse_flow("4/(1+exp(-6*x2)) - 2", "-4/(1+exp(-6*x1)) + 2", "0"));
    Vec3 x{0.1, 0.2, 0.3};
    for (auto _ : state) {
        x.c1 += 1e-12;
        benchmark::DoNotOptimize(f.value(x));
    }
}
BENCHMARK(BM_ExpressionValue);

void BM_ExpressionJacobian(benchmark::State& state) {
    const FlowField f = expression_flow(parse_flow("4/(1+exp(-6*x2)) - 2", "-4/(1+exp(-6*x1)) + 2", "0"));
    Vec3 x{0.1, 0.2, 0.3};
    for (auto _ : state) {
        x.c1 += 1e-12;
        benchmark::DoNotOptimize(f.jacobian(x));
    }
}
BENCHMARK(BM_ExpressionJacobian);

void BM_InteriorRhs(benchmark::State& state) {
    const Surface s = Surface::sphere();
    const FlowField f = builtin_vortex();
    ExtendedState st{{0.1, 0.2, 0.3}, {0.6, 0.8, 0}, 0.1, false};
    for (auto _ : state) {
        st.x.c1 += 1e-12;
        benchmark::DoNotOptimize(interior_rhs(s, f, st));
    }
}
BENCHMARK(BM_InteriorRhs);

void BM_BoundaryRhs(benchmark::State& state) {
    const Surface s = Surface::torus(2);
    const FlowField f = builtin_shear();
    const Vec3 x{3, 0, 0};
    Vec3 psi{0.3, 0.5, 0.8};
    for (auto _ : state) {
        psi.c1 += 1e-12;
        benchmark::DoNotOptimize(boundary_rhs(s, f, x, psi));
    }
}
BENCHMARK(BM_BoundaryRhs);

void BM_Shoot(benchmark::State& state) {
    const Scenario sc = vortex_sphere();
    for (auto _ : state) benchmark::DoNotOptimize(shoot(sc, 2.0, 4.4));
}
BENCHMARK(BM_Shoot)->Unit(benchmark::kMillisecond);

void BM_ScanInterior(benchmark::State& state) {
    Scenario sc = vortex_sphere();
    sc.search.threads = 1;
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(scan_interior(sc, n, 2 * n));
    state.SetItemsProcessed(state.iterations() * 2 * n * n);
}
BENCHMARK(BM_ScanInterior)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
