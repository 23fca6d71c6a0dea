// logihard: synthesize | score-traces | calibrate | evaluate | report

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "logihard/harness.hpp"
#include "logihard/io.hpp"
#include "logihard/parallel.hpp"

namespace fs = std::filesystem;
using namespace logihard;
using nlohmann::json;

namespace {

struct Globals {
    std::uint64_t seed = 0;
    std::string out;
};

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Hash of the resolved subcommand options, global seed and input bytes.
std::string config_hash(const CLI::App& sub, const Globals& g, const std::vector<std::string>& inputs) {
    std::string text = sub.get_name() + "\n" + sub.config_to_str(true, false) + "seed=" + std::to_string(g.seed) + "\n";
    for (const auto& path : inputs) {
        if (!path.empty()) text += path + "=" + hex64(fnv1a(read_file(path))) + "\n";
    }
    return hex64(fnv1a(text));
}

// Writes `text` to --out or stdout.
void emit(const Globals& g, const std::string& text) {
    if (g.out.empty() || g.out == "-") {
        std::cout << text;
        return;
    }
    const fs::path path(g.out);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + g.out);
    out << text;
}

// Human summaries go to stderr when data goes to stdout.
std::ostream& summary_stream(const Globals& g) { return g.out.empty() || g.out == "-" ? std::cerr : std::cout; }

std::string percent(double num, double den) {
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(1) << (den > 0 ? 100.0 * num / den : 0.0) << "%";
    return ss.str();
}

std::string fixed(double v, int digits = 3) {
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(digits) << v;
    return ss.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) {
        const std::string t = trim(cur);
        if (!t.empty()) parts.push_back(t);
    }
    return parts;
}

// ---------------------------------------------------------------------------
// synthesize

struct SynthesizeOpts {
    std::string bank;
    std::string tier = "Expert";
    std::string tier_mix;
    int m = 0;  // 0: tier default
};

std::vector<Tier> assign_tiers(const std::string& mix, std::size_t n, std::uint64_t seed) {
    std::map<Tier, double> shares;
    double total = 0;
    for (const auto& part : split(mix, ',')) {
        const auto eq = part.find('=');
        if (eq == std::string::npos) throw ConfigError("--tier-mix: expected Tier=share, got '" + part + "'");
        const double share = std::stod(part.substr(eq + 1));
        if (!(share >= 0)) throw ConfigError("--tier-mix: shares must be >= 0");
        shares[tier_from_string(trim(part.substr(0, eq)))] += share;
        total += share;
    }
    if (!(total > 0)) throw ConfigError("--tier-mix: shares sum to zero");
    // Largest remainder apportionment, ties broken by tier order.
    std::vector<std::pair<double, Tier>> remainders;
    std::map<Tier, std::size_t> counts;
    std::size_t assigned = 0;
    for (const auto& [tier, share] : shares) {
        const double exact = share / total * static_cast<double>(n);
        counts[tier] = static_cast<std::size_t>(exact);
        assigned += counts[tier];
        remainders.emplace_back(exact - static_cast<double>(counts[tier]), tier);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& x, const auto& y) { return x.first > y.first; });
    for (std::size_t k = 0; assigned < n; ++k, ++assigned) ++counts[remainders[k % remainders.size()].second];
    std::vector<Tier> tiers;
    for (const auto& [tier, count] : counts) tiers.insert(tiers.end(), count, tier);
    Rng rng(mix_seed(seed, fnv1a("tier-mix")));
    rng.shuffle(tiers);
    return tiers;
}

int cmd_synthesize(const SynthesizeOpts& o, const Globals& g) {
    const std::vector<AtomicQuestion> bank = load_atomic_bank(o.bank);
    std::vector<Tier> tiers = o.tier_mix.empty() ? std::vector<Tier>(bank.size(), tier_from_string(o.tier))
                                                 : assign_tiers(o.tier_mix, bank.size(), g.seed);
    const std::optional<int> m = o.m > 0 ? std::optional<int>(o.m) : std::nullopt;
    std::map<Tier, TierConfig> configs;
    for (Tier t : kAllTiers) {
        configs[t] = TierConfig::defaults(t, m);
    }
    std::vector<SynthesisJob> jobs;
    for (std::size_t k = 0; k < bank.size(); ++k) {
        jobs.push_back({&bank[k], configs.at(tiers[k]), mix_seed(g.seed, fnv1a(bank[k].id))});
    }
    const auto outcomes = synthesize_batch(jobs);
    std::vector<CombinatorialQuestion> out;
    std::map<Tier, int> per_tier;
    int regenerated = 0, extra_attempts = 0;
    for (std::size_t k = 0; k < outcomes.size(); ++k) {
        if (!outcomes[k].result) throw ConfigError(outcomes[k].error);
        const SynthesisResult& r = *outcomes[k].result;
        regenerated += r.attempts > 1 ? 1 : 0;
        extra_attempts += r.attempts - 1;
        ++per_tier[r.question.tier];
        out.push_back(r.question);
    }
    emit(g, bank_to_json(out).dump(2) + "\n");
    auto& s = summary_stream(g);
    s << "synthesized " << out.size() << " questions (seed " << g.seed << ")\n";
    s << "tier      count   share\n";
    for (Tier t : kAllTiers) {
        s << std::left << std::setw(8) << tier_name(t) << std::right << std::setw(7) << per_tier[t] << std::setw(8)
          << percent(per_tier[t], static_cast<double>(out.size())) << "\n";
    }
    s << "regeneration: " << regenerated << " of " << out.size() << " questions ("
      << percent(regenerated, static_cast<double>(out.size())) << "), " << extra_attempts << " extra attempts\n";
    return 0;
}

// ---------------------------------------------------------------------------
// score-traces

struct ScoreOpts {
    std::string traces;
    std::string lexicons;
    std::string locale = "en";
    std::string weights;
    std::string stats;
    std::string stats_out;
    std::string bank;
    std::string bank_out;
};

int cmd_score_traces(const ScoreOpts& o, const Globals& g) {
    const std::vector<ThinkingTrace> traces = load_traces(o.traces);
    const auto locale = parse_locale(o.locale);
    if (!locale) throw ConfigError("unknown locale '" + o.locale + "'");
    const Lexicons lex = o.lexicons.empty() ? Lexicons::defaults(*locale) : lexicons_from_json(read_json_file(o.lexicons));

    std::optional<CorpusStats> frozen;
    ScoringConfig scoring;
    if (!o.stats.empty()) {
        const json doc = read_json_file(o.stats);
        frozen = stats_from_json(doc);
        if (doc.contains("config")) scoring = ScoringConfig::from_json(doc["config"]);
    }
    if (!o.weights.empty()) scoring = ScoringConfig::from_json(read_json_file(o.weights));

    const std::vector<CognitiveMetrics> metrics = extract_metrics_batch(traces, lex);
    std::vector<MetricVector> z;
    CorpusStats stats;
    if (frozen) {
        stats = *frozen;
        for (const auto& m : metrics) z.push_back(z_normalize(m, stats));
    } else {
        Normalized n = z_normalize(metrics);
        z = std::move(n.z);
        stats = n.stats;
    }

    std::map<std::string, ItemFeatures> features;
    std::map<Tier, int> per_tier;
    std::string lines;
    for (std::size_t k = 0; k < traces.size(); ++k) {
        const GoldScore s = gold_score(z[k], scoring, fallacy_penalty(traces[k], lex));
        json comps = json::object();
        for (std::size_t i = 0; i < kMetricCount; ++i) comps[std::string(kMetricNames[i])] = s.components[i];
        const json row = {{"schema_version", kSchemaVersion},
                          {"question_id", traces[k].question_id},
                          {"metrics", metrics_to_json(metrics[k])},
                          {"z", comps},
                          {"gold_score", s.value},
                          {"penalty", s.penalty},
                          {"tier", tier_name(s.tier)}};
        lines += row.dump() + "\n";
        ++per_tier[s.tier];
        features[traces[k].question_id] =
            ItemFeatures{s.value, metrics[k].logic_density, metrics[k].thinking_length, metrics[k].segments, s.tier};
    }
    emit(g, lines);
    if (!o.stats_out.empty()) write_json_file(o.stats_out, stats_to_json(stats, scoring));

    auto& out = summary_stream(g);
    out << "scored " << traces.size() << " traces" << (frozen ? " against frozen stats\n" : "\n");
    for (Tier t : kAllTiers) out << "  " << tier_name(t) << ": " << per_tier[t] << "\n";

    if (!o.bank.empty()) {
        if (o.bank_out.empty()) throw ConfigError("--bank needs --bank-out");
        std::vector<AtomicQuestion> bank = load_atomic_bank(o.bank);
        int attached = 0;
        for (auto& q : bank) {
            const auto it = features.find(q.id);
            if (it == features.end()) continue;
            q.features = it->second;
            ++attached;
        }
        write_json_file(o.bank_out, bank_to_json(bank));
        out << "attached features to " << attached << " of " << bank.size() << " questions\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// calibrate

struct CalibrateOpts {
    std::vector<std::string> banks;
};

// Combinatorial items take discrimination from their operator tier; atomic
// items have no operators and use the cognitive tier of their features.
std::optional<ItemParams> calibrate_item(const std::string& id, const std::optional<ItemFeatures>& f,
                                         std::optional<Tier> operator_tier, int m, Subset subset, std::string& why) {
    if (!f || !f->gold_score || !f->logic_density || !f->thinking_length || !f->segments) {
        why = "missing cognitive features";
        return std::nullopt;
    }
    const Tier tier = operator_tier.value_or(f->cognitive_tier.value_or(stratify(*f->gold_score)));
    ItemParams p;
    p.item_id = id;
    p.subset = subset;
    p.a = discrimination_for_tier(tier);
    p.b = calibrate_difficulty(*f->gold_score, *f->logic_density, *f->thinking_length, *f->segments);
    p.c = guessing_for_options(m);
    return p;
}

int cmd_calibrate(const CalibrateOpts& o, const Globals& g) {
    std::vector<ItemParams> items;
    int skipped = 0;
    for (const auto& path : o.banks) {
        const json doc = read_json_file(path);
        const json records = doc.is_object() && doc.contains("records") ? doc["records"] : doc;
        if (!records.is_array()) throw ConfigError(path + ": expected a JSON array of records");
        for (const auto& r : records) {
            std::string why;
            std::optional<ItemParams> p;
            std::string id;
            if (r.contains("answer_set")) {
                const CombinatorialQuestion q = combinatorial_from_json(r);
                id = q.id;
                p = calibrate_item(q.id, q.features, q.tier, q.n_options(), Subset::Combinatorial, why);
            } else {
                const AtomicQuestion q = atomic_from_json(r);
                id = q.id;
                p = calibrate_item(q.id, q.features, std::nullopt, 4, Subset::Base, why);
            }
            if (p) {
                items.push_back(*p);
            } else {
                ++skipped;
                std::cerr << "warning: skipping '" << id << "': " << why << "\n";
            }
        }
    }
    emit(g, bank_to_json(items).dump(2) + "\n");
    summary_stream(g) << "calibrated " << items.size() << " items, skipped " << skipped << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateOpts {
    std::string base;
    std::string comb;
    std::vector<std::string> items;
    std::string mode = "static";
    std::string simulate;
    bool memorize = false;
    std::string script;
    std::string endpoint;
    std::vector<std::string> baselines;
    std::string log;
    int concurrency = 1;
    bool strict = false;
    int max_items = 60;
    double se_target = 0.3;
    std::string selection = "information";
    std::string information = "quoted";
};

std::unique_ptr<Responder> make_responder(const EvaluateOpts& o, const Globals& g, LogWriter* log) {
    const int chosen = (o.simulate.empty() ? 0 : 1) + (o.memorize ? 1 : 0) + (o.script.empty() ? 0 : 1) +
                       (o.endpoint.empty() ? 0 : 1);
    if (chosen != 1) throw ConfigError("choose exactly one of --simulate, --memorize, --script, --endpoint");
    if (!o.simulate.empty()) {
        const auto parts = split(o.simulate, ',');
        if (parts.size() != 2) throw ConfigError("--simulate expects theta_base,theta_comb");
        return std::make_unique<SimulatedResponder>(std::stod(parts[0]), std::stod(parts[1]), mix_seed(g.seed, 3));
    }
    if (o.memorize) return std::make_unique<MemorizationResponder>(mix_seed(g.seed, 4));
    if (!o.script.empty()) {
        return std::make_unique<ScriptedResponder>(
            read_json_file(o.script).get<std::map<std::string, std::string>>());
    }
    TransportLog transport;
    if (log) transport = [log](const json& entry) { log->write(entry); };
    EndpointConfig endpoint = EndpointConfig::from_json(read_json_file(o.endpoint));
    if (!endpoint.api_key_env.empty() && std::getenv(endpoint.api_key_env.c_str()) == nullptr) {
        throw ConfigError("environment variable " + endpoint.api_key_env + " is not set");
    }
    return std::make_unique<HttpResponder>(std::move(endpoint), transport);
}

void print_report(std::ostream& out, const ScoreReport& r) {
    out << "mode " << mode_name(r.mode) << ", seed " << r.seed << ", config " << r.config_hash << "\n";
    const auto table = [&](const std::map<std::string, GroupScore>& groups) {
        out << "  group       n  scored  accuracy  mean_f1  hit_rate  parse_fail  transport_fail\n";
        for (const auto& [name, gs] : groups) {
            out << "  " << std::left << std::setw(8) << name << std::right << std::setw(5) << gs.n << std::setw(8)
                << gs.scored << std::setw(10) << fixed(gs.accuracy) << std::setw(9) << fixed(gs.mean_f1)
                << std::setw(10) << fixed(gs.option_hit_rate) << std::setw(12) << gs.parse_failures << std::setw(16)
                << gs.transport_failures << "\n";
        }
    };
    table(r.groups);
    if (r.cat) {
        for (const auto& [name, e] : {std::pair{"base", r.cat->base}, std::pair{"comb", r.cat->comb}}) {
            out << "  theta_" << name << " = " << fixed(e.theta_hat) << " +/- " << fixed(e.se) << " ("
                << e.n_administered << " items)\n";
        }
        out << "  delta_theta = " << fixed(r.cat->delta_theta) << " (combined SE " << fixed(r.cat->combined_se)
            << ")\n";
    }
    if (!r.baselines.empty()) {
        out << "baselines\n";
        table(r.baselines);
    }
}

int cmd_evaluate(const EvaluateOpts& o, const Globals& g, const CLI::App& sub) {
    BenchmarkConfig cfg;
    cfg.mode = mode_from_string(o.mode);
    cfg.seed = g.seed;
    cfg.concurrency = o.concurrency;
    cfg.cat.max_items = o.max_items;
    cfg.cat.se_target = o.se_target;
    cfg.cat.skip_failures = !o.strict;
    cfg.cat.selection = o.selection == "random" ? SelectionRule::Random : SelectionRule::MaxInformation;
    cfg.cat.information = o.information == "exact" ? InformationModel::Exact : InformationModel::Quoted;
    for (const auto& b : o.baselines) {
        for (const auto& name : split(b, ',')) {
            if (name == "nota") {
                cfg.baseline_nota = true;
            } else if (name == "shuffle") {
                cfg.baseline_shuffle = true;
            } else {
                throw ConfigError("unknown baseline '" + name + "'");
            }
        }
    }
    std::vector<std::string> inputs{o.base, o.comb, o.script, o.endpoint};
    inputs.insert(inputs.end(), o.items.begin(), o.items.end());
    cfg.config_hash = config_hash(sub, g, inputs);

    BenchmarkInput input;
    if (!o.base.empty()) input.base = load_atomic_bank(o.base);
    if (!o.comb.empty()) input.comb = load_combinatorial_bank(o.comb);
    for (const auto& path : o.items) {
        for (auto& p : load_item_bank(path)) input.params[p.item_id] = p;
    }

    std::ofstream log_file;
    std::unique_ptr<LogWriter> log;
    if (!o.log.empty()) {
        const fs::path lp(o.log);
        if (lp.has_parent_path()) fs::create_directories(lp.parent_path());
        log_file.open(lp, std::ios::binary);
        if (!log_file) throw ConfigError("cannot write " + o.log);
        log = std::make_unique<LogWriter>(log_file);
    }
    auto responder = make_responder(o, g, log.get());
    const ScoreReport report = run_benchmark(*responder, input, cfg, log.get());
    emit(g, report.to_json().dump(2) + "\n");
    print_report(summary_stream(g), report);
    return 0;
}

// ---------------------------------------------------------------------------
// report

struct ReportOpts {
    std::string log;
    bool per_item = false;
};

int cmd_report(const ReportOpts& o, const Globals& g) {
    std::ifstream in(o.log, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + o.log);
    const Replay replay = replay_log(in);
    std::ostringstream out;
    out << "log " << o.log << ": " << replay.lines << " lines, " << replay.skipped_lines << " skipped\n";
    if (replay.responses.empty() && !replay.embedded) {
        out << "no records\n";
        emit(g, out.str());
        return 0;
    }
    const ScoreReport& shown = replay.embedded ? *replay.embedded : replay.recomputed;
    print_report(out, shown);
    if (o.per_item || replay.responses.size() <= 20) {
        out << "responses\n  question_id            group     gold        parsed      exact  f1\n";
        for (const auto& r : replay.responses) {
            out << "  " << std::left << std::setw(22) << r.question_id << " " << std::setw(9) << r.group << " "
                << std::setw(11) << format_letters(r.gold) << " " << std::setw(11)
                << (r.status == TransportStatus::Ok ? format_letters(r.parsed) : std::string(status_name(r.status)))
                << " " << std::setw(6) << (r.exact ? "true" : "false") << " " << fixed(r.f1, 3) << "\n";
        }
    }
    int rc = 0;
    if (!replay.embedded) {
        out << "replay check: no embedded report\n";
    } else if (replay.matches()) {
        out << "replay check: pass\n";
    } else {
        out << "replay check: FAIL (recomputed aggregates differ from the embedded report)\n";
        out << "recomputed:\n";
        print_report(out, replay.recomputed);
        rc = 1;
    }
    emit(g, out.str());
    return rc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Combinatorial logic benchmark hardening: synthesis, trace scoring, calibration, evaluation"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Config file (TOML/INI); command-line flags take precedence");
    Globals g;
    app.add_option("--seed", g.seed, "Master seed")->capture_default_str();
    app.add_option("--out", g.out, "Primary output file (default stdout)");

    SynthesizeOpts so;
    auto* syn = app.add_subcommand("synthesize", "Transform an atomic bank into verified combinatorial questions");
    syn->add_option("--bank", so.bank, "Atomic question bank (JSON)")->required()->check(CLI::ExistingFile);
    syn->add_option("--tier", so.tier, "Tier for every question")->capture_default_str()->check(
        CLI::IsMember({"Easy", "Medium", "Hard", "Expert"}, CLI::ignore_case));
    syn->add_option("--tier-mix", so.tier_mix, "Tier shares, e.g. Easy=20,Medium=40,Hard=30,Expert=10");
    syn->add_option("--m", so.m, "Options per question (5..8); default per tier");

    ScoreOpts sc;
    auto* score = app.add_subcommand("score-traces", "Extract cognitive metrics and Gold Scores from traces");
    score->add_option("--traces", sc.traces, "JSONL of {question_id, text}")->required()->check(CLI::ExistingFile);
    score->add_option("--lexicons", sc.lexicons, "Lexicon JSON (default built-in for --locale)")
        ->check(CLI::ExistingFile);
    score->add_option("--locale", sc.locale, "Built-in lexicon locale (en, zh)")->capture_default_str();
    score->add_option("--weights", sc.weights, "Scoring config JSON (weights, penalty_rate, offset)")
        ->check(CLI::ExistingFile);
    score->add_option("--stats", sc.stats, "Frozen corpus statistics to score against")->check(CLI::ExistingFile);
    score->add_option("--stats-out", sc.stats_out, "Write corpus statistics here");
    score->add_option("--bank", sc.bank, "Atomic bank to attach features to")->check(CLI::ExistingFile);
    score->add_option("--bank-out", sc.bank_out, "Scored bank output");

    CalibrateOpts co;
    auto* cal = app.add_subcommand("calibrate", "Derive 3PL item parameters from cognitive features");
    cal->add_option("--bank", co.banks, "Scored atomic or combinatorial bank (repeatable)")
        ->required()
        ->check(CLI::ExistingFile);

    EvaluateOpts eo;
    auto* ev = app.add_subcommand("evaluate", "Administer the banks to a model or simulator");
    ev->add_option("--base", eo.base, "Atomic bank")->check(CLI::ExistingFile);
    ev->add_option("--comb", eo.comb, "Combinatorial bank")->check(CLI::ExistingFile);
    ev->add_option("--items", eo.items, "Calibrated item bank (repeatable)")->check(CLI::ExistingFile);
    ev->add_option("--mode", eo.mode, "static or cat")->capture_default_str()->check(CLI::IsMember({"static", "cat"}));
    ev->add_option("--simulate", eo.simulate, "Simulated respondent abilities theta_base,theta_comb");
    ev->add_flag("--memorize", eo.memorize, "Memorization respondent");
    ev->add_option("--script", eo.script, "JSON map of question id to response text")->check(CLI::ExistingFile);
    ev->add_option("--endpoint", eo.endpoint, "Chat-completions endpoint config JSON")->check(CLI::ExistingFile);
    ev->add_option("--baseline", eo.baselines, "Extra static columns: nota, shuffle");
    ev->add_option("--log", eo.log, "JSONL run log");
    ev->add_option("--concurrency", eo.concurrency, "In-flight requests in static mode")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    ev->add_flag("--strict", eo.strict, "Score transport failures as incorrect instead of skipping");
    ev->add_option("--max-items", eo.max_items, "CAT item cap per subset")->capture_default_str();
    ev->add_option("--se-target", eo.se_target, "CAT stopping SE")->capture_default_str();
    ev->add_option("--selection", eo.selection, "information or random")
        ->capture_default_str()
        ->check(CLI::IsMember({"information", "random"}));
    ev->add_option("--information", eo.information, "quoted or exact")
        ->capture_default_str()
        ->check(CLI::IsMember({"quoted", "exact"}));

    ReportOpts ro;
    auto* rep = app.add_subcommand("report", "Summarize a run log and check it against its embedded report");
    rep->add_option("--log", ro.log, "JSONL run log")->required()->check(CLI::ExistingFile);
    rep->add_flag("--per-item", ro.per_item, "Always list every response");

    CLI11_PARSE(app, argc, argv);

    try {
        if (syn->parsed()) {
            so.tier = std::string(tier_name(tier_from_string(so.tier)));
            return cmd_synthesize(so, g);
        }
        if (score->parsed()) return cmd_score_traces(sc, g);
        if (cal->parsed()) return cmd_calibrate(co, g);
        if (ev->parsed()) return cmd_evaluate(eo, g, *ev);
        if (rep->parsed()) return cmd_report(ro, g);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 1;
}
