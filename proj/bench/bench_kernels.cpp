// Serial reference vs OpenMP kernels on the three batch workloads.

#include <benchmark/benchmark.h>

#include "logihard/io.hpp"
#include "logihard/parallel.hpp"

using namespace logihard;

namespace {

const std::vector<AtomicQuestion>& sources() {
    static const auto bank = load_atomic_bank(LOGIHARD_SOURCE_DIR "/data/sample/atomic_bank.json");
    return bank;
}

std::vector<SynthesisJob> synthesis_jobs(int n) {
    std::vector<SynthesisJob> jobs;
    const auto& bank = sources();
    for (int k = 0; k < n; ++k) {
        jobs.push_back({&bank[k % bank.size()], TierConfig::defaults(static_cast<Tier>(k % 4)), mix_seed(1, k)});
    }
    return jobs;
}

void BM_Synthesis(benchmark::State& state) {
    const auto jobs = synthesis_jobs(static_cast<int>(state.range(0)));
    const auto exec = static_cast<Execution>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(synthesize_batch(jobs, exec));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_Metrics(benchmark::State& state) {
    std::vector<ThinkingTrace> traces;
    for (const auto& t : load_traces(LOGIHARD_SOURCE_DIR "/data/sample/traces.jsonl")) traces.push_back(t);
    while (traces.size() < static_cast<std::size_t>(state.range(0))) traces.push_back(traces[traces.size() % 40]);
    const auto exec = static_cast<Execution>(state.range(1));
    const auto& lex = Lexicons::defaults(Locale::En);
    for (auto _ : state) benchmark::DoNotOptimize(extract_metrics_batch(traces, lex, exec));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_CatSimulation(benchmark::State& state) {
    Rng rng(5);
    std::vector<ItemParams> bank;
    for (int k = 0; k < 400; ++k) {
        bank.push_back({"i" + std::to_string(k), discrimination_for_tier(static_cast<Tier>(k % 4)), -3 + 6 * rng.unit(),
                        1.0 / 6.0, Subset::Combinatorial});
    }
    std::vector<CatJob> jobs;
    for (int k = 0; k < state.range(0); ++k) jobs.push_back({-2 + 4 * rng.unit(), mix_seed(9, k)});
    const auto exec = static_cast<Execution>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(simulate_cat_batch(jobs, Subset::Combinatorial, bank, CatConfig{}, exec));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

// Second argument: 0 serial, 1 parallel.
BENCHMARK(BM_Synthesis)->ArgsProduct({{1000, 10000}, {0, 1}})->ArgNames({"n", "parallel"})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Metrics)->ArgsProduct({{400}, {0, 1}})->ArgNames({"n", "parallel"})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CatSimulation)->ArgsProduct({{500}, {0, 1}})->ArgNames({"n", "parallel"})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
