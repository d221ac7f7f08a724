#include <benchmark/benchmark.h>

#include "qcorr/dynamics.hpp"

using namespace qcorr;

namespace {

void BM_EigHermitian4(benchmark::State& state) {
    const DensityMatrix rho = random_density(1, 4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(eig_hermitian(rho.mat()));
    }
}
BENCHMARK(BM_EigHermitian4);

void BM_DistanceTrace(benchmark::State& state) {
    const DensityMatrix a = random_density(2, 4);
    const DensityMatrix b = random_density(3, 4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(distance(DistanceKind::Trace, a, b));
    }
}
BENCHMARK(BM_DistanceTrace);

void BM_DistanceBures(benchmark::State& state) {
    const DensityMatrix a = random_density(4, 4);
    const DensityMatrix b = random_density(5, 4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(distance(DistanceKind::BuresSquared, a, b));
    }
}
BENCHMARK(BM_DistanceBures);

void BM_DistanceRelativeEntropy(benchmark::State& state) {
    const DensityMatrix a = random_density(6, 4);
    const DensityMatrix b = random_density(7, 4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(distance(DistanceKind::RelativeEntropy, a, b));
    }
}
BENCHMARK(BM_DistanceRelativeEntropy);

void BM_ClosestClassicalAxis(benchmark::State& state) {
    const BDTriple c = {0.9, -0.54, 0.6};
    const DistanceKind kind = static_cast<DistanceKind>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(closest_classical_axis(c, kind));
    }
}
BENCHMARK(BM_ClosestClassicalAxis)->DenseRange(0, 4);

void BM_ApplyKraus(benchmark::State& state) {
    const KrausChannel ch = local_decoherence(decoherence_from_survival(3, 0.6));
    const DensityMatrix rho = bd_to_density({1, -0.6, 0.6});
    for (auto _ : state) {
        benchmark::DoNotOptimize(apply_kraus(ch, rho));
    }
}
BENCHMARK(BM_ApplyKraus);

void BM_TrajectoryStep(benchmark::State& state) {
    const BDTriple c = {1, -0.6, 0.6};
    for (auto _ : state) {
        const BDTriple evolved = evolve_triple(c, decoherence_from_survival(3, 0.8));
        benchmark::DoNotOptimize(discord_geometric(evolved, DistanceKind::BuresSquared));
    }
}
BENCHMARK(BM_TrajectoryStep);

void BM_ValidateCptpChoi(benchmark::State& state) {
    const KrausChannel ch = global_rephasing(0.5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(validate_cptp(ch));
    }
}
BENCHMARK(BM_ValidateCptpChoi);

}  // namespace

BENCHMARK_MAIN();
