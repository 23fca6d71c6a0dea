#include "logihard/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace logihard {

namespace {

SynthesisOutcome synthesize_one(const SynthesisJob& job) {
    SynthesisOutcome out;
    try {
        out.result = synthesize(*job.question, job.config, job.seed);
    } catch (const std::exception& ex) {
        out.error = ex.what();
    }
    return out;
}

CatOutcome simulate_one(const CatJob& job, Subset subset, std::span<const ItemParams> bank, const CatConfig& config) {
    SimulatedRespondent respondent(job.theta, job.seed);
    const SessionResult r = run_session(subset, respondent, bank, config, mix_seed(job.seed, 2));
    return {r.session.estimate, r.accuracy, r.bank_exhausted};
}

// Element-wise map; the parallel branch uses dynamic scheduling because
// regeneration and session lengths vary per element.
template <typename In, typename Out, typename F>
void map_into(std::span<const In> in, std::vector<Out>& out, Execution exec, F&& f) {
    out.resize(in.size());
    const auto n = static_cast<std::int64_t>(in.size());
    if (exec == Execution::Serial) {
        for (std::int64_t i = 0; i < n; ++i) out[i] = f(in[i]);
        return;
    }
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < n; ++i) out[i] = f(in[i]);
}

}  // namespace

std::vector<SynthesisOutcome> synthesize_batch(std::span<const SynthesisJob> jobs, Execution exec) {
    std::vector<SynthesisOutcome> out;
    map_into(jobs, out, exec, synthesize_one);
    return out;
}

std::vector<CognitiveMetrics> extract_metrics_batch(std::span<const ThinkingTrace> traces, const Lexicons& lexicons,
                                                    Execution exec) {
    std::vector<CognitiveMetrics> out;
    map_into(traces, out, exec, [&](const ThinkingTrace& t) { return extract_metrics(t, lexicons); });
    return out;
}

std::vector<CatOutcome> simulate_cat_batch(std::span<const CatJob> jobs, Subset subset,
                                           std::span<const ItemParams> bank, const CatConfig& config, Execution exec) {
    std::vector<CatOutcome> out;
    map_into(jobs, out, exec, [&](const CatJob& j) { return simulate_one(j, subset, bank, config); });
    return out;
}

int worker_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace logihard
