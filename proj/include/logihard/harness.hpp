#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "logihard/answer_format.hpp"
#include "logihard/irt.hpp"
#include "logihard/synthesis.hpp"

namespace logihard {

// ---------------------------------------------------------------------------
// Prompts

// The evaluation system prompt, byte for byte.
extern const std::string kSystemPrompt;

struct Prompt {
    std::string system;
    std::string user;
    bool operator==(const Prompt&) const = default;
};

// Atomic: context then options "A. ..", "B. ..". Combinatorial: context,
// statements I-IV, then the lettered formula options.
Prompt build_prompt(const AtomicQuestion& q);
Prompt build_prompt(const CombinatorialQuestion& q);

// ---------------------------------------------------------------------------
// Items as administered by the harness

struct EvalItem {
    std::string id;
    Subset subset = Subset::Base;
    Prompt prompt;
    LetterSet valid_letters;
    LetterSet gold;
    std::optional<char> memorized_letter;  // atomic answer letter when it is visible as an option
    std::optional<ItemParams> params;
};

EvalItem make_eval_item(const AtomicQuestion& q);
EvalItem make_eval_item(const CombinatorialQuestion& q);

// ---------------------------------------------------------------------------
// Transport

enum class TransportStatus : std::uint8_t { Ok, Timeout, ParseFailure, HttpError };

std::string_view status_name(TransportStatus s);
TransportStatus status_from_string(std::string_view s);

struct EndpointConfig {
    std::string base_url;  // e.g. https://api.example.com/v1
    std::string model_name;
    std::string api_key_env;  // empty: no Authorization header
    double temperature = 1.0;
    int max_tokens = 65536;
    int timeout_seconds = 600;
    int max_retries = 2;
    int backoff_ms = 1000;  // doubled after every retry

    void validate() const;  // throws ConfigError
    static EndpointConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

struct Reply {
    std::string text;
    TransportStatus status = TransportStatus::Ok;
    int http_code = 0;
    int retries = 0;
    std::int64_t latency_ms = 0;
    std::string error;
};

// Receives one JSON object per HTTP exchange; the API key never appears.
using TransportLog = std::function<void(const nlohmann::json&)>;

// One chat-completions request with retry on timeouts, connection errors,
// 429 and 5xx.
Reply query_model(const EndpointConfig& endpoint, const Prompt& prompt, const TransportLog& log = {});

// ---------------------------------------------------------------------------
// Responders

// Maps an administered item to raw answer text. `nonce` distinguishes
// repeated administrations of the same item; implementations must be safe to
// call concurrently.
class Responder {
public:
    virtual ~Responder() = default;
    virtual Reply respond(const EvalItem& item, std::uint64_t nonce) = 0;
};

class HttpResponder final : public Responder {
public:
    explicit HttpResponder(EndpointConfig endpoint, TransportLog log = {})
        : endpoint_(std::move(endpoint)), log_(std::move(log)) {}
    Reply respond(const EvalItem& item, std::uint64_t nonce) override;

private:
    EndpointConfig endpoint_;
    TransportLog log_;
};

// Answers correctly with probability P(theta*, item) under the item's 3PL
// parameters; a wrong answer drops one gold letter or names a non-gold one.
class SimulatedResponder final : public Responder {
public:
    SimulatedResponder(double theta_base, double theta_comb, std::uint64_t seed)
        : theta_base_(theta_base), theta_comb_(theta_comb), seed_(seed) {}
    Reply respond(const EvalItem& item, std::uint64_t nonce) override;

private:
    double theta_base_;
    double theta_comb_;
    std::uint64_t seed_;
};

// Knows only the atomic answer. On an atomic item it answers that letter; on
// a combinatorial item the letter carries no information, so it names one
// option uniformly at random.
class MemorizationResponder final : public Responder {
public:
    explicit MemorizationResponder(std::uint64_t seed) : seed_(seed) {}
    Reply respond(const EvalItem& item, std::uint64_t nonce) override;

private:
    std::uint64_t seed_;
};

// Replays fixed texts by item id; unknown ids produce an http_error reply.
class ScriptedResponder final : public Responder {
public:
    explicit ScriptedResponder(std::map<std::string, std::string> texts) : texts_(std::move(texts)) {}
    Reply respond(const EvalItem& item, std::uint64_t nonce) override;

private:
    std::map<std::string, std::string> texts_;
};

// ---------------------------------------------------------------------------
// Records, log, report

struct ResponseRecord {
    std::string group;  // base, comb, original, nota, shuffle
    std::string question_id;
    std::string raw_text;
    LetterSet parsed;
    LetterSet gold;
    bool exact = false;
    double f1 = 0.0;
    double precision = 0.0;  // |parsed & gold| / |parsed|
    std::int64_t latency_ms = 0;
    int retries = 0;
    TransportStatus status = TransportStatus::Ok;

    nlohmann::json to_json() const;
    static ResponseRecord from_json(const nlohmann::json& j);
};

// Parses and scores a reply. A transport failure keeps its status; an
// unparseable answer becomes ParseFailure with an empty set.
ResponseRecord score_reply(const EvalItem& item, const Reply& reply, std::string group, ParseOptions options = {});

// Serializes appends from concurrent writers.
class LogWriter {
public:
    explicit LogWriter(std::ostream& out) : out_(&out) {}
    void write(const nlohmann::json& record);

private:
    std::mutex mutex_;
    std::ostream* out_;
};

struct GroupScore {
    int n = 0;             // records
    int scored = 0;        // records counted toward accuracy
    int exact = 0;
    int parse_failures = 0;
    int transport_failures = 0;
    double accuracy = 0.0;  // exact-set match over scored records
    double mean_f1 = 0.0;
    double option_hit_rate = 0.0;  // mean precision over scored records

    nlohmann::json to_json() const;
    static GroupScore from_json(const nlohmann::json& j);
};

struct CatSummary {
    AbilityEstimate base;
    AbilityEstimate comb;
    double delta_theta = 0.0;
    double combined_se = 0.0;
};

enum class RunMode : std::uint8_t { Static, Cat };

std::string_view mode_name(RunMode m);
RunMode mode_from_string(std::string_view s);

struct ScoreReport {
    RunMode mode = RunMode::Static;
    std::map<std::string, GroupScore> groups;  // base, comb
    std::optional<CatSummary> cat;
    std::map<std::string, GroupScore> baselines;  // original, nota, shuffle
    std::uint64_t seed = 0;
    std::string config_hash;

    nlohmann::json to_json() const;
    static ScoreReport from_json(const nlohmann::json& j);
};

// Aggregates records with the report's policy: transport failures are left
// out of accuracy unless `strict`, parse failures count as incorrect.
GroupScore aggregate(const std::vector<ResponseRecord>& records, bool strict);

struct BenchmarkConfig {
    RunMode mode = RunMode::Static;
    CatConfig cat;
    bool baseline_nota = false;
    bool baseline_shuffle = false;
    std::uint64_t seed = 0;
    int concurrency = 1;  // simultaneous in-flight requests in static mode
    ParseOptions parse;
    std::string config_hash;
};

struct BenchmarkInput {
    std::vector<AtomicQuestion> base;
    std::vector<CombinatorialQuestion> comb;
    // Item parameters by question id; required for every question in cat mode.
    std::map<std::string, ItemParams> params;
};

// Static: administers each bank in order. Cat: dual CAT session over the two
// banks. NOTA / shuffle variants of the base bank are administered
// statically when requested. Every record is streamed to `log`.
ScoreReport run_benchmark(Responder& responder, const BenchmarkInput& input, const BenchmarkConfig& config,
                          LogWriter* log = nullptr);

struct BenchmarkItems {
    std::vector<EvalItem> base;
    std::vector<EvalItem> comb;
    std::vector<EvalItem> nota;     // empty: no NOTA column
    std::vector<EvalItem> shuffle;  // empty: no shuffle column
};

BenchmarkItems prepare_items(const BenchmarkInput& input, const BenchmarkConfig& config);
ScoreReport run_benchmark(Responder& responder, const BenchmarkItems& items, const BenchmarkConfig& config,
                          LogWriter* log = nullptr);

// Recomputes a report from a JSONL log: group aggregates from response
// records and ability estimates by replaying the logged CAT steps.
struct Replay {
    ScoreReport recomputed;
    std::optional<ScoreReport> embedded;
    std::vector<ResponseRecord> responses;
    std::size_t lines = 0;
    std::size_t skipped_lines = 0;
    bool strict = false;

    // True when an embedded report exists and every aggregate agrees.
    bool matches(double tolerance = 1e-12) const;
};

Replay replay_log(std::istream& in);

}  // namespace logihard
