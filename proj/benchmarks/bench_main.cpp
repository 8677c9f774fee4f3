#include <benchmark/benchmark.h>

#include "loglap/assembly.hpp"
#include "loglap/pointops.hpp"
#include "loglap/spectral.hpp"

using namespace loglap;

static void BM_PairIntegral2D(benchmark::State& st) {
    QuadratureConfig q;
    const Index o{static_cast<int>(st.range(0)), 1, 0};
    for (auto _ : st) benchmark::DoNotOptimize(lattice_pair_integral(2, 1.0 / 8, o, 0.0, PairPart::full, q));
}
BENCHMARK(BM_PairIntegral2D)->Arg(1)->Arg(4)->Arg(16);

static void BM_AssembleInterval(benchmark::State& st) {
    QuadratureConfig q;
    const CellMesh m = build_mesh(Domain::interval(0, 1), static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(assemble_log_potential(m, q, {1}).stiffness.data());
}
BENCHMARK(BM_AssembleInterval)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_AssembleDisk(benchmark::State& st) {
    QuadratureConfig q;
    const CellMesh m = build_mesh(Domain::ball(2, 1.0), static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(assemble_log_potential(m, q, {1}).stiffness.data());
}
BENCHMARK(BM_AssembleDisk)->Arg(6)->Arg(12)->Unit(benchmark::kMillisecond);

static void BM_Eigensolve(benchmark::State& st) {
    QuadratureConfig q;
    const AssembledForm f = assemble_log_potential(build_mesh(Domain::interval(0, 1), static_cast<int>(st.range(0))), q);
    for (auto _ : st) benchmark::DoNotOptimize(solve_gevp(f.stiffness, f.mass, 4).eigenvalues.data());
}
BENCHMARK(BM_Eigensolve)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

static void BM_LogLaplacianPoint(benchmark::State& st) {
    QuadratureConfig q;
    const ScalarField u = make_bump(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(loglap_at(u, {0.3, 0.1, 0.0}, q));
}
BENCHMARK(BM_LogLaplacianPoint)->Arg(1)->Arg(2)->Unit(benchmark::kMicrosecond);

static void BM_FourierGrid(benchmark::State& st) {
    const TorusGrid g = sample_torus(make_bump(1), 8.0, static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(loglap_fourier_grid(g).samples.data());
}
BENCHMARK(BM_FourierGrid)->Arg(256)->Arg(1024);
BENCHMARK_MAIN();
