// Serial reference vs OpenMP kernels on synthetic inputs.

#include <benchmark/benchmark.h>

#include "dualcascade/calibration.hpp"
#include "dualcascade/complementarity.hpp"
#include "dualcascade/kernels.hpp"
#include "dualcascade/synthetic.hpp"

using namespace dualcascade;

namespace {

PairedDataset dataset(std::size_t n) {
    synthetic::PairSpec spec;
    spec.samples = n;
    auto [a, b] = synthetic::make_pair(spec);
    return align_records(a, b);
}

template <bool Parallel>
void score_table(benchmark::State& state) {
    const auto d = dataset(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        auto rows = Parallel ? kernels::score_table(d, ScoreKind::EntropyNormalized)
                             : kernels::serial::score_table(d, ScoreKind::EntropyNormalized);
        benchmark::DoNotOptimize(rows.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void sweep(benchmark::State& state) {
    const auto d = dataset(static_cast<std::size_t>(state.range(0)));
    const auto rows = kernels::serial::score_table(d, ScoreKind::Difference);
    const auto lambdas = candidate_lambdas(d, ScoreKind::Difference);
    for (auto _ : state) {
        auto counts = Parallel ? kernels::sweep(rows, lambdas, ScoreKind::Difference, true)
                               : kernels::serial::sweep(rows, lambdas, ScoreKind::Difference, true);
        benchmark::DoNotOptimize(counts.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(lambdas.size() * rows.size()));
}

template <bool Parallel>
void complementarity_cells(benchmark::State& state) {
    const auto models = static_cast<std::size_t>(state.range(0));
    synthetic::SplitMix64 rng(3);
    std::vector<std::vector<bool>> correct(models, std::vector<bool>(10000));
    for (auto& v : correct) {
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = rng.uniform() < 0.9;
    }
    for (auto _ : state) {
        auto cells = Parallel ? kernels::complementarity_cells(correct) : kernels::serial::complementarity_cells(correct);
        benchmark::DoNotOptimize(cells.data());
    }
}

template <bool Parallel>
void moment_sums(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    synthetic::SplitMix64 rng(9);
    const auto img = synthetic::random_image(rng, side, side, 1);
    for (auto _ : state) {
        auto sums = Parallel ? kernels::moment_sums(img) : kernels::serial::moment_sums(img);
        benchmark::DoNotOptimize(sums);
    }
    state.SetItemsProcessed(state.iterations() * side * side);
}

} // namespace

BENCHMARK(score_table<false>)->Name("score_table/serial")->Arg(1000)->Arg(20000);
BENCHMARK(score_table<true>)->Name("score_table/omp")->Arg(1000)->Arg(20000);
BENCHMARK(sweep<false>)->Name("sweep/serial")->Arg(500)->Arg(5000);
BENCHMARK(sweep<true>)->Name("sweep/omp")->Arg(500)->Arg(5000);
BENCHMARK(complementarity_cells<false>)->Name("complementarity_cells/serial")->Arg(8)->Arg(32);
BENCHMARK(complementarity_cells<true>)->Name("complementarity_cells/omp")->Arg(8)->Arg(32);
BENCHMARK(moment_sums<false>)->Name("moment_sums/serial")->Arg(64)->Arg(512);
BENCHMARK(moment_sums<true>)->Name("moment_sums/omp")->Arg(64)->Arg(512);

BENCHMARK_MAIN();
