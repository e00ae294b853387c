#include <benchmark/benchmark.h>

#include "llb/ensemble.hpp"
#include "llb/fft.hpp"
#include "llb/norms.hpp"
#include "llb/operators.hpp"
#include "llb/solver.hpp"

namespace {

llb::SpectralField sample_field(const llb::Grid& g, const llb::DyadicPartition& P) {
    llb::FieldEnsembleSpec spec;
    spec.kind = llb::FieldEnsembleSpec::Kind::PowerLaw;
    spec.alpha = 2.0;
    spec.amplitude = 0.1;
    spec.seed = 42;
    return llb::ensemble_sample(spec, g, P, 0);
}

void BM_ForwardTransform(benchmark::State& state) {
    const llb::Grid g(static_cast<int>(state.range(0)));
    const llb::DyadicPartition P = llb::build_partition(g);
    const llb::PhysicalField f = llb::inverse_transform(sample_field(g, P));
    for (auto _ : state) benchmark::DoNotOptimize(llb::forward_transform(f));
}
BENCHMARK(BM_ForwardTransform)->Arg(32)->Arg(64);

void BM_DealiasedProduct(benchmark::State& state) {
    const llb::Grid g(static_cast<int>(state.range(0)));
    const llb::DyadicPartition P = llb::build_partition(g);
    const llb::SpectralField u = sample_field(g, P);
    for (auto _ : state) benchmark::DoNotOptimize(llb::dealiased_product(u, u));
}
BENCHMARK(BM_DealiasedProduct)->Arg(32)->Arg(64);

void BM_BesovNorm(benchmark::State& state) {
    const llb::Grid g(static_cast<int>(state.range(0)));
    const llb::DyadicPartition P = llb::build_partition(g);
    const llb::SpectralField u = sample_field(g, P);
    for (auto _ : state) benchmark::DoNotOptimize(llb::besov(u, 1.5, 2.0, 1.0, P));
}
BENCHMARK(BM_BesovNorm)->Arg(32)->Arg(64);

void BM_SolverStep(benchmark::State& state) {
    const llb::Grid g(static_cast<int>(state.range(0)));
    const llb::DyadicPartition P = llb::build_partition(g);
    llb::LLBParams params;
    llb::SolverState s;
    s.u = sample_field(g, P);
    s.dt = 1e-3;
    for (auto _ : state) benchmark::DoNotOptimize(llb::step(s, params));
}
BENCHMARK(BM_SolverStep)->Arg(32)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
