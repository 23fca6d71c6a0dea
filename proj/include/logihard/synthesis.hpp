#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "logihard/common.hpp"
#include "logihard/logic.hpp"

namespace logihard {

// Cognitive features carried through the bank files when present.
struct ItemFeatures {
    std::optional<double> gold_score;
    std::optional<double> logic_density;
    std::optional<double> thinking_length;
    std::optional<double> segments;
    std::optional<Tier> cognitive_tier;

    bool operator==(const ItemFeatures&) const = default;
};

// A single-answer, four-option source question.
struct AtomicQuestion {
    std::string id;
    std::string context;
    std::vector<std::string> options;  // I..IV; validated to exactly four
    PropVar answer = PropVar::I;
    Locale language = Locale::En;
    std::string source;
    std::string reasoning_type;
    std::optional<ItemFeatures> features;

    bool operator==(const AtomicQuestion&) const = default;
};

// Rejected question input.
class QuestionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Atomization {
    std::array<std::string, 4> statements;
    Assignment truth;
};

// Restates each option as a statement s_i and derives the ground truth.
Atomization atomize(const AtomicQuestion& q);

struct TierConfig {
    Tier tier = Tier::Easy;
    std::vector<PatternKind> allowed;
    std::vector<PatternKind> required;
    int n_correct_min = 1;
    int n_correct_max = 1;
    int n_options = 6;
    std::map<PatternKind, double> weights;

    bool allows(PatternKind kind) const;

    // Default operator hierarchy. Easy uses 5 options unless `n_options` is
    // given, since its pools hold only 1 + 4 formulas.
    static TierConfig defaults(Tier tier, std::optional<int> n_options = std::nullopt);
    // Throws ConfigError on inconsistent ranges or weights.
    void validate() const;
};

struct CombinatorialOption {
    char letter;
    Formula formula;
    std::string text;
    PatternKind kind;

    bool operator==(const CombinatorialOption&) const = default;
};

struct CombinatorialQuestion {
    std::string id;
    std::string source_id;
    std::string context;
    std::array<std::string, 4> statements;
    std::vector<CombinatorialOption> options;
    std::vector<char> answer_set;  // sorted letters
    Tier tier = Tier::Easy;
    std::uint64_t seed = 0;
    PropVar source_answer = PropVar::I;
    std::string source_answer_text;
    Locale language = Locale::En;
    std::string source;
    std::string reasoning_type;
    std::optional<ItemFeatures> features;

    int n_options() const { return static_cast<int>(options.size()); }
    bool operator==(const CombinatorialQuestion&) const = default;
};

struct Violation {
    char letter;  // '-' for question-level rules
    std::string rule;
    std::string message;
};

struct VerificationReport {
    bool valid = true;
    std::vector<Violation> violations;
};

// Pools of formulas true / false under the ground truth for answer `a`.
std::vector<Pattern> valid_patterns(const TierConfig& cfg, PropVar a);
std::vector<Pattern> distractor_patterns(const TierConfig& cfg, PropVar a);
std::vector<Formula> generate_valid_pool(const TierConfig& cfg, PropVar a);
std::vector<Formula> generate_distractor_pool(const TierConfig& cfg, PropVar a);

// Throws ConfigError("tier infeasible for this configuration") when the
// pools cannot fill every n_correct in the configured range.
CombinatorialQuestion assemble(const AtomicQuestion& q, const TierConfig& cfg, std::uint64_t seed);

// Independent check: truth labels read from the full truth table at the
// source assignment, tier requirements, answer-set size, duplicates, leakage.
VerificationReport verify(const CombinatorialQuestion& cq);

struct SynthesisResult {
    CombinatorialQuestion question;
    int attempts = 1;  // 1 means no regeneration
};

inline constexpr int kMaxSynthesisAttempts = 16;

// assemble + verify, re-seeding with seed+1 on failure.
SynthesisResult synthesize(const AtomicQuestion& q, const TierConfig& cfg, std::uint64_t seed,
                           int max_attempts = kMaxSynthesisAttempts);

inline constexpr std::string_view kNotaText = "None of the Above";

AtomicQuestion apply_nota(const AtomicQuestion& q);
AtomicQuestion shuffle_options(const AtomicQuestion& q, std::uint64_t seed);

}  // namespace logihard
