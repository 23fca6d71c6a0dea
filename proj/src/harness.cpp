#include "logihard/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <istream>
#include <thread>

namespace logihard {

const std::string kSystemPrompt =
    "You are taking a multiple-choice logic test.\n"
    "\n"
    "Instructions:\n"
    "- Read the context carefully (may contain statements I, II, III, IV)\n"
    "- Evaluate each option (A, B, C, D, etc.)\n"
    "- Select ALL options that are correct (may be one or more)\n"
    "- You may show your reasoning, but put your FINAL ANSWER as just the letter(s) on the last line\n"
    "- Format: \"A\" or \"A, B\" or \"B, C, D\"";

Prompt build_prompt(const AtomicQuestion& q) {
    if (q.options.size() != 4) throw QuestionError("question '" + q.id + "': not four atomic options");
    std::string user = q.context + "\n\n";
    for (std::size_t k = 0; k < q.options.size(); ++k) {
        user += static_cast<char>('A' + k);
        user += ". " + q.options[k] + "\n";
    }
    user.pop_back();
    return {kSystemPrompt, user};
}

Prompt build_prompt(const CombinatorialQuestion& q) {
    std::string user = q.context + "\n\nStatements:\n";
    for (std::size_t i = 0; i < 4; ++i) {
        user += std::string(roman(var_from_index(static_cast<int>(i)))) + ". " + q.statements[i] + "\n";
    }
    user += "\nOptions:\n";
    for (const auto& opt : q.options) {
        user += opt.letter;
        user += ". " + opt.text + "\n";
    }
    user.pop_back();
    return {kSystemPrompt, user};
}

EvalItem make_eval_item(const AtomicQuestion& q) {
    EvalItem item;
    item.id = q.id;
    item.subset = Subset::Base;
    item.prompt = build_prompt(q);
    item.valid_letters = letters_up_to(4);
    const char answer = static_cast<char>('A' + index_of(q.answer));
    item.gold = {answer};
    item.memorized_letter = answer;
    return item;
}

EvalItem make_eval_item(const CombinatorialQuestion& q) {
    EvalItem item;
    item.id = q.id;
    item.subset = Subset::Combinatorial;
    item.prompt = build_prompt(q);
    item.valid_letters = letters_up_to(q.n_options());
    item.gold = normalize_letters(q.answer_set);
    return item;
}

std::string_view status_name(TransportStatus s) {
    switch (s) {
        case TransportStatus::Ok: return "ok";
        case TransportStatus::Timeout: return "timeout";
        case TransportStatus::ParseFailure: return "parse_failure";
        case TransportStatus::HttpError: return "http_error";
    }
    return "unknown";
}

TransportStatus status_from_string(std::string_view s) {
    for (auto st : {TransportStatus::Ok, TransportStatus::Timeout, TransportStatus::ParseFailure,
                    TransportStatus::HttpError}) {
        if (s == status_name(st)) return st;
    }
    throw std::invalid_argument("unknown transport status '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// Responders

Reply HttpResponder::respond(const EvalItem& item, std::uint64_t) { return query_model(endpoint_, item.prompt, log_); }

namespace {

Reply text_reply(std::string text) {
    Reply r;
    r.text = std::move(text);
    return r;
}

Rng item_rng(std::uint64_t seed, const EvalItem& item, std::uint64_t nonce) {
    // The prompt enters the stream so NOTA and shuffled variants draw independently.
    return Rng(mix_seed(seed ^ fnv1a(item.id) ^ mix_seed(fnv1a(item.prompt.user), 5),
                        nonce * 2 + static_cast<std::uint64_t>(item.subset)));
}

}  // namespace

Reply SimulatedResponder::respond(const EvalItem& item, std::uint64_t nonce) {
    Rng rng = item_rng(seed_, item, nonce);
    ItemParams params = item.params.value_or(
        ItemParams{item.id, 1.0, 0.0, guessing_for_options(static_cast<int>(item.valid_letters.size())), item.subset});
    const double theta = item.subset == Subset::Base ? theta_base_ : theta_comb_;
    LetterSet answer = item.gold;
    if (!rng.bernoulli(probability_3pl(theta, params))) {
        if (answer.size() > 1) {
            answer.erase(answer.begin() + static_cast<std::ptrdiff_t>(rng.below(answer.size())));
        } else {
            LetterSet wrong;
            std::set_difference(item.valid_letters.begin(), item.valid_letters.end(), item.gold.begin(),
                                item.gold.end(), std::back_inserter(wrong));
            answer = {wrong[rng.below(wrong.size())]};
        }
    }
    return text_reply("Simulated reasoning.\n" + format_letters(answer));
}

Reply MemorizationResponder::respond(const EvalItem& item, std::uint64_t nonce) {
    if (item.memorized_letter) return text_reply(std::string(1, *item.memorized_letter));
    Rng rng = item_rng(seed_, item, nonce);
    return text_reply(std::string(1, item.valid_letters[rng.below(item.valid_letters.size())]));
}

Reply ScriptedResponder::respond(const EvalItem& item, std::uint64_t) {
    const auto it = texts_.find(item.id);
    if (it == texts_.end()) {
        Reply r;
        r.status = TransportStatus::HttpError;
        r.error = "no scripted text for '" + item.id + "'";
        return r;
    }
    return text_reply(it->second);
}

// ---------------------------------------------------------------------------
// Records

nlohmann::json ResponseRecord::to_json() const {
    return {{"type", "response"},
            {"schema_version", kSchemaVersion},
            {"group", group},
            {"question_id", question_id},
            {"raw_text", raw_text},
            {"parsed", format_letters(parsed)},
            {"gold", format_letters(gold)},
            {"exact", exact},
            {"f1", f1},
            {"precision", precision},
            {"latency_ms", latency_ms},
            {"retries", retries},
            {"transport_status", status_name(status)}};
}

namespace {

LetterSet letters_from_text(const std::string& s) {
    LetterSet out;
    for (char c : s) {
        if (c >= 'A' && c <= 'Z') out.push_back(c);
    }
    return normalize_letters(out);
}

}  // namespace

ResponseRecord ResponseRecord::from_json(const nlohmann::json& j) {
    ResponseRecord r;
    r.group = j.at("group").get<std::string>();
    r.question_id = j.at("question_id").get<std::string>();
    r.raw_text = j.value("raw_text", "");
    r.parsed = letters_from_text(j.at("parsed").get<std::string>());
    r.gold = letters_from_text(j.at("gold").get<std::string>());
    r.exact = j.at("exact").get<bool>();
    r.f1 = j.at("f1").get<double>();
    r.precision = j.value("precision", 0.0);
    r.latency_ms = j.value("latency_ms", std::int64_t{0});
    r.retries = j.value("retries", 0);
    r.status = status_from_string(j.at("transport_status").get<std::string>());
    return r;
}

ResponseRecord score_reply(const EvalItem& item, const Reply& reply, std::string group, ParseOptions options) {
    ResponseRecord rec;
    rec.group = std::move(group);
    rec.question_id = item.id;
    rec.raw_text = reply.text;
    rec.gold = item.gold;
    rec.latency_ms = reply.latency_ms;
    rec.retries = reply.retries;
    rec.status = reply.status;
    if (reply.status != TransportStatus::Ok) return rec;
    const ParsedAnswer parsed = parse_answer(reply.text, item.valid_letters, options);
    if (!parsed.ok) {
        rec.status = TransportStatus::ParseFailure;
        return rec;
    }
    rec.parsed = parsed.letters;
    const AnswerScore s = score_response(rec.parsed, rec.gold);
    rec.exact = s.exact;
    rec.f1 = s.f1;
    LetterSet common;
    std::set_intersection(rec.parsed.begin(), rec.parsed.end(), rec.gold.begin(), rec.gold.end(),
                          std::back_inserter(common));
    rec.precision = static_cast<double>(common.size()) / static_cast<double>(rec.parsed.size());
    return rec;
}

void LogWriter::write(const nlohmann::json& record) {
    const std::string line = record.dump();
    std::lock_guard lock(mutex_);
    *out_ << line << '\n';
    out_->flush();
}

// ---------------------------------------------------------------------------
// Aggregates and reports

namespace {

bool is_transport_failure(TransportStatus s) { return s == TransportStatus::Timeout || s == TransportStatus::HttpError; }

}  // namespace

GroupScore aggregate(const std::vector<ResponseRecord>& records, bool strict) {
    GroupScore g;
    double f1_sum = 0.0, hit_sum = 0.0;
    for (const auto& r : records) {
        ++g.n;
        if (r.status == TransportStatus::ParseFailure) ++g.parse_failures;
        if (is_transport_failure(r.status)) {
            ++g.transport_failures;
            if (!strict) continue;
        }
        ++g.scored;
        g.exact += r.exact ? 1 : 0;
        f1_sum += r.f1;
        hit_sum += r.precision;
    }
    if (g.scored > 0) {
        g.accuracy = static_cast<double>(g.exact) / g.scored;
        g.mean_f1 = f1_sum / g.scored;
        g.option_hit_rate = hit_sum / g.scored;
    }
    return g;
}

nlohmann::json GroupScore::to_json() const {
    return {{"n", n},
            {"scored", scored},
            {"exact", exact},
            {"parse_failures", parse_failures},
            {"transport_failures", transport_failures},
            {"accuracy", accuracy},
            {"mean_f1", mean_f1},
            {"option_hit_rate", option_hit_rate}};
}

GroupScore GroupScore::from_json(const nlohmann::json& j) {
    GroupScore g;
    g.n = j.at("n").get<int>();
    g.scored = j.at("scored").get<int>();
    g.exact = j.at("exact").get<int>();
    g.parse_failures = j.at("parse_failures").get<int>();
    g.transport_failures = j.at("transport_failures").get<int>();
    g.accuracy = j.at("accuracy").get<double>();
    g.mean_f1 = j.at("mean_f1").get<double>();
    g.option_hit_rate = j.at("option_hit_rate").get<double>();
    return g;
}

std::string_view mode_name(RunMode m) { return m == RunMode::Static ? "static" : "cat"; }

RunMode mode_from_string(std::string_view s) {
    if (s == "static") return RunMode::Static;
    if (s == "cat") return RunMode::Cat;
    throw std::invalid_argument("unknown mode '" + std::string(s) + "'");
}

namespace {

nlohmann::json estimate_json(const AbilityEstimate& e) {
    return {{"theta_hat", e.theta_hat}, {"se", e.se}, {"n_administered", e.n_administered}};
}

AbilityEstimate estimate_from_json(const nlohmann::json& j) {
    return {j.at("theta_hat").get<double>(), j.at("se").get<double>(), j.at("n_administered").get<int>()};
}

}  // namespace

nlohmann::json ScoreReport::to_json() const {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["mode"] = mode_name(mode);
    j["groups"] = nlohmann::json::object();
    for (const auto& [name, g] : groups) j["groups"][name] = g.to_json();
    if (cat) {
        j["cat"] = {{"base", estimate_json(cat->base)},
                    {"comb", estimate_json(cat->comb)},
                    {"delta_theta", cat->delta_theta},
                    {"combined_se", cat->combined_se}};
    }
    if (!baselines.empty()) {
        nlohmann::json b = nlohmann::json::object();
        for (const auto& [name, g] : baselines) b[name] = g.to_json();
        if (baselines.count("original")) {
            nlohmann::json deltas = nlohmann::json::object();
            for (const auto& [name, g] : baselines) {
                if (name != "original") deltas[name] = g.accuracy - baselines.at("original").accuracy;
            }
            b["accuracy_delta_vs_original"] = deltas;
        }
        j["baselines"] = b;
    }
    j["metadata"] = {{"seed", seed}, {"config_hash", config_hash}};
    return j;
}

ScoreReport ScoreReport::from_json(const nlohmann::json& j) {
    ScoreReport r;
    r.mode = mode_from_string(j.at("mode").get<std::string>());
    for (const auto& [name, g] : j.at("groups").items()) r.groups[name] = GroupScore::from_json(g);
    if (j.contains("cat")) {
        const auto& c = j["cat"];
        r.cat = CatSummary{estimate_from_json(c.at("base")), estimate_from_json(c.at("comb")),
                           c.at("delta_theta").get<double>(), c.at("combined_se").get<double>()};
    }
    if (j.contains("baselines")) {
        for (const auto& [name, g] : j["baselines"].items()) {
            if (name != "accuracy_delta_vs_original") r.baselines[name] = GroupScore::from_json(g);
        }
    }
    r.seed = j.at("metadata").at("seed").get<std::uint64_t>();
    r.config_hash = j.at("metadata").at("config_hash").get<std::string>();
    return r;
}

// ---------------------------------------------------------------------------
// Running

BenchmarkItems prepare_items(const BenchmarkInput& input, const BenchmarkConfig& config) {
    BenchmarkItems items;
    const auto attach = [&](EvalItem& item) {
        const auto it = input.params.find(item.id);
        if (it != input.params.end()) {
            item.params = it->second;
            item.params->subset = item.subset;
        }
    };
    for (const auto& q : input.base) {
        items.base.push_back(make_eval_item(q));
        attach(items.base.back());
    }
    for (const auto& q : input.comb) {
        items.comb.push_back(make_eval_item(q));
        attach(items.comb.back());
    }
    for (const auto& q : input.base) {
        if (config.baseline_nota) {
            items.nota.push_back(make_eval_item(apply_nota(q)));
            attach(items.nota.back());
        }
        if (config.baseline_shuffle) {
            items.shuffle.push_back(make_eval_item(shuffle_options(q, mix_seed(config.seed, fnv1a(q.id)))));
            attach(items.shuffle.back());
        }
    }
    return items;
}

namespace {

nlohmann::json step_json(const StepLog& s) {
    return {{"type", "cat_step"},
            {"schema_version", kSchemaVersion},
            {"subset", subset_name(s.subset)},
            {"step", s.step},
            {"item_id", s.item.item_id},
            {"a", s.item.a},
            {"b", s.item.b},
            {"c", s.item.c},
            {"response", s.response ? nlohmann::json(*s.response) : nlohmann::json(nullptr)},
            {"theta_hat", s.theta_hat},
            {"se", s.se}};
}

// Administers items in order, up to `concurrency` at once; records come back
// in item order regardless of completion order.
std::vector<ResponseRecord> administer_static(Responder& responder, const std::vector<EvalItem>& items,
                                              const std::string& group, const BenchmarkConfig& config,
                                              LogWriter* log) {
    std::vector<ResponseRecord> records(items.size());
    const auto work = [&](std::size_t k) {
        const Reply reply = responder.respond(items[k], 0);
        records[k] = score_reply(items[k], reply, group, config.parse);
    };
    const int threads = std::max(1, std::min<int>(config.concurrency, static_cast<int>(items.size())));
    if (threads == 1) {
        for (std::size_t k = 0; k < items.size(); ++k) work(k);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (std::size_t k = next++; k < items.size(); k = next++) work(k);
            });
        }
    }
    if (log) {
        for (const auto& r : records) log->write(r.to_json());
    }
    return records;
}

// Bridges harness responders to the CAT loop.
class CatBridge final : public ItemResponder {
public:
    CatBridge(Responder& responder, const std::vector<EvalItem>& base, const std::vector<EvalItem>& comb,
              const BenchmarkConfig& config, LogWriter* log)
        : responder_(responder), config_(config), log_(log) {
        for (const auto& i : base) items_[{Subset::Base, i.id}] = &i;
        for (const auto& i : comb) items_[{Subset::Combinatorial, i.id}] = &i;
    }

    std::optional<bool> answer(const ItemParams& params) override {
        const EvalItem& item = *items_.at({params.subset, params.item_id});
        const Reply reply = responder_.respond(item, 0);
        ResponseRecord rec = score_reply(item, reply, std::string(subset_name(params.subset)), config_.parse);
        if (log_) log_->write(rec.to_json());
        records_[static_cast<std::size_t>(params.subset)].push_back(rec);
        if (is_transport_failure(rec.status)) return std::nullopt;
        return rec.exact;
    }

    const std::vector<ResponseRecord>& records(Subset s) const { return records_[static_cast<std::size_t>(s)]; }

private:
    Responder& responder_;
    const BenchmarkConfig& config_;
    LogWriter* log_;
    std::map<std::pair<Subset, std::string>, const EvalItem*> items_;
    std::array<std::vector<ResponseRecord>, 2> records_;
};

std::vector<ItemParams> bank_of(const std::vector<EvalItem>& items) {
    std::vector<ItemParams> bank;
    for (const auto& i : items) {
        if (!i.params) throw ConfigError("cat mode: question '" + i.id + "' has no item parameters");
        ItemParams p = *i.params;
        p.item_id = i.id;
        p.subset = i.subset;
        p.validate();
        bank.push_back(p);
    }
    return bank;
}

nlohmann::json run_header(const BenchmarkConfig& config) {
    return {{"type", "run"},
            {"schema_version", kSchemaVersion},
            {"mode", mode_name(config.mode)},
            {"strict", !config.cat.skip_failures},
            {"seed", config.seed},
            {"config_hash", config.config_hash},
            {"max_items", config.cat.max_items},
            {"se_target", config.cat.se_target}};
}

}  // namespace

ScoreReport run_benchmark(Responder& responder, const BenchmarkInput& input, const BenchmarkConfig& config,
                          LogWriter* log) {
    return run_benchmark(responder, prepare_items(input, config), config, log);
}

ScoreReport run_benchmark(Responder& responder, const BenchmarkItems& items, const BenchmarkConfig& config,
                          LogWriter* log) {
    if (items.base.empty() && items.comb.empty()) throw ConfigError("run_benchmark: empty bank");
    const bool strict = !config.cat.skip_failures;
    ScoreReport report;
    report.mode = config.mode;
    report.seed = config.seed;
    report.config_hash = config.config_hash;
    if (log) log->write(run_header(config));

    if (config.mode == RunMode::Static) {
        for (const auto& [group, list] : {std::pair<std::string, const std::vector<EvalItem>*>{"base", &items.base},
                                          {"comb", &items.comb}}) {
            if (list->empty()) continue;
            report.groups[group] = aggregate(administer_static(responder, *list, group, config, log), strict);
        }
    } else {
        if (items.base.empty() || items.comb.empty()) throw ConfigError("cat mode needs both banks");
        const std::vector<ItemParams> base_bank = bank_of(items.base);
        const std::vector<ItemParams> comb_bank = bank_of(items.comb);
        CatBridge bridge(responder, items.base, items.comb, config, log);
        const DualReport dual = run_dual_session(bridge, base_bank, comb_bank, config.cat, config.seed);
        if (log) {
            for (const auto& s : dual.steps) log->write(step_json(s));
        }
        report.groups["base"] = aggregate(bridge.records(Subset::Base), strict);
        report.groups["comb"] = aggregate(bridge.records(Subset::Combinatorial), strict);
        report.cat = CatSummary{dual.base, dual.comb, dual.delta_theta, dual.combined_se()};
    }

    if (!items.nota.empty() || !items.shuffle.empty()) {
        if (config.mode == RunMode::Static && report.groups.count("base")) {
            report.baselines["original"] = report.groups["base"];
        } else {
            report.baselines["original"] =
                aggregate(administer_static(responder, items.base, "original", config, log), strict);
        }
        if (!items.nota.empty()) {
            report.baselines["nota"] = aggregate(administer_static(responder, items.nota, "nota", config, log), strict);
        }
        if (!items.shuffle.empty()) {
            report.baselines["shuffle"] =
                aggregate(administer_static(responder, items.shuffle, "shuffle", config, log), strict);
        }
    }
    if (log) log->write({{"type", "report"}, {"schema_version", kSchemaVersion}, {"report", report.to_json()}});
    return report;
}

// ---------------------------------------------------------------------------
// Replay

namespace {

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

bool same_group(const GroupScore& x, const GroupScore& y, double tol) {
    return x.n == y.n && x.scored == y.scored && x.exact == y.exact && x.parse_failures == y.parse_failures &&
           x.transport_failures == y.transport_failures && close(x.accuracy, y.accuracy, tol) &&
           close(x.mean_f1, y.mean_f1, tol) && close(x.option_hit_rate, y.option_hit_rate, tol);
}

bool same_groups(const std::map<std::string, GroupScore>& x, const std::map<std::string, GroupScore>& y, double tol) {
    if (x.size() != y.size()) return false;
    for (const auto& [name, g] : x) {
        const auto it = y.find(name);
        if (it == y.end() || !same_group(g, it->second, tol)) return false;
    }
    return true;
}

bool same_estimate(const AbilityEstimate& x, const AbilityEstimate& y, double tol) {
    return x.n_administered == y.n_administered && close(x.theta_hat, y.theta_hat, tol) && close(x.se, y.se, tol);
}

}  // namespace

bool Replay::matches(double tol) const {
    if (!embedded) return false;
    const ScoreReport& e = *embedded;
    const ScoreReport& r = recomputed;
    if (e.mode != r.mode || !same_groups(e.groups, r.groups, tol) || !same_groups(e.baselines, r.baselines, tol)) {
        return false;
    }
    if (e.cat.has_value() != r.cat.has_value()) return false;
    if (e.cat) {
        return same_estimate(e.cat->base, r.cat->base, tol) && same_estimate(e.cat->comb, r.cat->comb, tol) &&
               close(e.cat->delta_theta, r.cat->delta_theta, tol) && close(e.cat->combined_se, r.cat->combined_se, tol);
    }
    return true;
}

Replay replay_log(std::istream& in) {
    Replay out;
    std::map<std::string, std::vector<ResponseRecord>> by_group;
    std::array<CatSession, 2> sessions{CatSession::start(Subset::Base), CatSession::start(Subset::Combinatorial)};
    bool saw_steps = false;
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        ++out.lines;
        try {
            const nlohmann::json j = nlohmann::json::parse(line);
            const std::string type = j.at("type").get<std::string>();
            if (type == "run") {
                out.recomputed.mode = mode_from_string(j.at("mode").get<std::string>());
                out.recomputed.seed = j.at("seed").get<std::uint64_t>();
                out.recomputed.config_hash = j.at("config_hash").get<std::string>();
                out.strict = j.value("strict", false);
            } else if (type == "response") {
                ResponseRecord r = ResponseRecord::from_json(j);
                by_group[r.group].push_back(r);
                out.responses.push_back(std::move(r));
            } else if (type == "cat_step") {
                saw_steps = true;
                if (j.at("response").is_null()) continue;
                const Subset subset = subset_from_string(j.at("subset").get<std::string>());
                const ItemParams item{j.at("item_id").get<std::string>(), j.at("a").get<double>(),
                                      j.at("b").get<double>(), j.at("c").get<double>(), subset};
                eap_update_in_place(sessions[static_cast<std::size_t>(subset)], item, j["response"].get<bool>());
            } else if (type == "http") {
                // transport diagnostics carry no scores
            } else if (type == "report") {
                out.embedded = ScoreReport::from_json(j.at("report"));
            } else {
                ++out.skipped_lines;
            }
        } catch (const std::exception&) {
            ++out.skipped_lines;
        }
    }
    for (const auto& [group, records] : by_group) {
        const GroupScore g = aggregate(records, out.strict);
        if (group == "base" || group == "comb") {
            out.recomputed.groups[group] = g;
        } else {
            out.recomputed.baselines[group] = g;
        }
    }
    if (!out.recomputed.baselines.empty() && !out.recomputed.baselines.count("original") &&
        out.recomputed.groups.count("base")) {
        out.recomputed.baselines["original"] = out.recomputed.groups["base"];
    }
    if (out.recomputed.mode == RunMode::Cat || saw_steps) {
        const AbilityEstimate b = sessions[0].estimate;
        const AbilityEstimate c = sessions[1].estimate;
        out.recomputed.cat =
            CatSummary{b, c, b.theta_hat - c.theta_hat, std::sqrt(b.se * b.se + c.se * c.se)};
    }
    return out;
}

}  // namespace logihard
