#pragma once

#include <array>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "logihard/common.hpp"
#include "logihard/logic.hpp"

namespace logihard {

struct ThinkingTrace {
    std::string question_id;
    std::string text;

    static ThinkingTrace make(std::string question_id, std::string text) {
        return {std::move(question_id), std::move(text)};
    }
    // Whitespace-delimited token count.
    std::size_t token_count() const;
};

// Marker word lists. Matching is case-insensitive on ASCII, respects word
// boundaries around ASCII letters and digits, and prefers the longest marker
// at each position.
struct Lexicons {
    std::vector<std::string> reversal;
    std::vector<std::string> connectives;
    std::vector<std::string> hypothesis;
    std::vector<std::string> elimination;
    std::vector<std::string> thesis;
    std::vector<std::string> antithesis;
    std::vector<std::string> synthesis;
    std::vector<std::string> premise_layer;
    std::vector<std::string> deduction_step;
    std::vector<std::string> pivot;
    std::vector<std::string> self_contradiction;
    // Epistemic stance classes; entropy is taken over their hit counts.
    std::map<std::string, std::vector<std::string>> epistemic;
    // abstraction[k] holds cues of level k + 1 (1 concrete .. 3 principle).
    std::array<std::vector<std::string>, 3> abstraction;

    static const Lexicons& defaults(Locale locale);
};

inline constexpr std::size_t kMetricCount = 9;

inline constexpr std::array<std::string_view, kMetricCount> kMetricNames{
    "oscillation",  "logic_density",       "abductive_depth", "dialectic_tension", "dimensional_awareness",
    "chain_length", "uncertainty_entropy", "pivot_count",     "abstraction"};

using MetricVector = std::array<double, kMetricCount>;

struct CognitiveMetrics {
    double oscillation = 0;            // reversal-marker hits
    double logic_density = 0;          // connectives per 100 tokens
    double abductive_depth = 0;        // hypothesis -> elimination cycles
    double dialectic_tension = 0;      // thesis -> antithesis -> synthesis triples
    double dimensional_awareness = 0;  // premise-layer markers
    double chain_length = 0;           // explicit deduction steps
    double uncertainty_entropy = 0;    // nats over epistemic classes
    double pivot_count = 0;
    double abstraction = 0;            // ordinal 0..3
    double thinking_length = 0;        // tokens
    double segments = 0;               // paragraph-delimited segments

    // The nine Gold Score inputs in kMetricNames order.
    MetricVector scored() const;
    bool operator==(const CognitiveMetrics&) const = default;
};

CognitiveMetrics extract_metrics(const ThinkingTrace& trace, const Lexicons& lexicons);

// Population mean / std per scored metric.
struct CorpusStats {
    std::size_t size = 0;
    MetricVector mean{};
    MetricVector stddev{};
};

inline constexpr double kStdFloor = 1e-8;

struct Normalized {
    std::vector<MetricVector> z;
    CorpusStats stats;
};

// Throws ConfigError("insufficient corpus") when fewer than two entries.
Normalized z_normalize(const std::vector<CognitiveMetrics>& corpus);
// Scores a new item against frozen statistics.
MetricVector z_normalize(const CognitiveMetrics& metrics, const CorpusStats& stats);

struct ScoringConfig {
    MetricVector weights{1, 1, 1, 1, 1, 1, 1, 1, 1};
    double penalty_rate = 1.0;  // beta
    double offset = 23.2;       // mu0

    // Requires every metric weight by name; throws ConfigError.
    static ScoringConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

struct GoldScore {
    double value = 0;
    Tier tier = Tier::Easy;
    MetricVector components{};  // z-scores
    double penalty = 0;         // beta * R
};

// Easy < 20 <= Medium < 25 <= Hard < 30 <= Expert.
Tier stratify(double value);

GoldScore gold_score(const MetricVector& z, const ScoringConfig& config, double fallacy_score);

// Contradiction count R. Each "answer is X" claim whose letter is missing
// from the final answer adds 1, as does each self-contradiction marker.
using FallacyDetector = std::function<double(const ThinkingTrace&)>;
double fallacy_penalty(const ThinkingTrace& trace, const Lexicons& lexicons = Lexicons::defaults(Locale::En));

// Lexicon file I/O (JSON object keyed by the field names above).
nlohmann::json lexicons_to_json(const Lexicons& lex);
Lexicons lexicons_from_json(const nlohmann::json& j);

nlohmann::json stats_to_json(const CorpusStats& stats, const ScoringConfig& config);
CorpusStats stats_from_json(const nlohmann::json& j);

nlohmann::json metrics_to_json(const CognitiveMetrics& m);

}  // namespace logihard
