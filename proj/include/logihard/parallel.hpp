#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "logihard/cognitive.hpp"
#include "logihard/irt.hpp"
#include "logihard/synthesis.hpp"

namespace logihard {

// Batch kernels. Each has an OpenMP implementation and a serial reference;
// both produce identical output for identical input, since every element is
// computed from its own job description and seed.
enum class Execution : std::uint8_t { Serial, Parallel };

struct SynthesisJob {
    const AtomicQuestion* question;
    TierConfig config;
    std::uint64_t seed;
};

struct SynthesisOutcome {
    std::optional<SynthesisResult> result;
    std::string error;  // set when synthesis threw
};

std::vector<SynthesisOutcome> synthesize_batch(std::span<const SynthesisJob> jobs,
                                               Execution exec = Execution::Parallel);

std::vector<CognitiveMetrics> extract_metrics_batch(std::span<const ThinkingTrace> traces, const Lexicons& lexicons,
                                                    Execution exec = Execution::Parallel);

struct CatJob {
    double theta;
    std::uint64_t seed;  // respondent stream; selection stream derives from it
};

struct CatOutcome {
    AbilityEstimate estimate;
    double accuracy = 0.0;
    bool bank_exhausted = false;
};

// One simulated single-subset session per job over a shared read-only bank.
std::vector<CatOutcome> simulate_cat_batch(std::span<const CatJob> jobs, Subset subset,
                                           std::span<const ItemParams> bank, const CatConfig& config,
                                           Execution exec = Execution::Parallel);

int worker_threads();

}  // namespace logihard
