#include "logihard/cognitive.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <regex>

#include "logihard/answer_format.hpp"

namespace logihard {

std::size_t ThinkingTrace::token_count() const {
    std::size_t count = 0;
    bool in_token = false;
    for (unsigned char c : text) {
        const bool space = std::isspace(c) != 0;
        if (!space && !in_token) ++count;
        in_token = !space;
    }
    return count;
}

const Lexicons& Lexicons::defaults(Locale locale) {
    static const Lexicons en = [] {
        Lexicons l;
        l.reversal = {"however", "wait", "but wait", "no wait", "hold on", "that's wrong", "that is wrong"};
        l.connectives = {"if",      "then",    "therefore", "thus",   "hence",  "because", "since",
                         "so",      "and",     "or",        "not",    "implies", "unless", "only if",
                         "either",  "neither", "nor",       "consequently"};
        l.hypothesis = {"suppose", "assume", "let's say", "what if", "hypothesize", "consider the case"};
        l.elimination = {"ruled out", "rule out", "eliminate", "eliminated", "contradiction", "impossible",
                         "cannot be", "can't be"};
        l.thesis = {"on one hand", "one could argue", "the argument is", "it seems that"};
        l.antithesis = {"on the other hand", "conversely", "counterargument", "by contrast"};
        l.synthesis = {"overall", "taken together", "in conclusion", "combining these", "reconciling"};
        l.premise_layer = {"premise", "given that", "we know", "observed", "inferred", "it follows"};
        l.deduction_step = {"step", "first", "second", "third", "fourth", "fifth", "next", "finally"};
        l.pivot = {"let me reconsider", "let me re-examine", "alternatively", "instead", "on second thought",
                   "let me check again", "re-evaluate", "rethink"};
        l.self_contradiction = {"i contradicted myself", "this contradicts what i said", "contradicts my earlier",
                                "that's inconsistent with what i said"};
        l.epistemic = {
            {"certain", {"definitely", "certainly", "clearly", "must", "surely"}},
            {"probable", {"likely", "probably"}},
            {"possible", {"maybe", "perhaps", "possibly", "might", "could be"}},
            {"doubt", {"not sure", "unsure", "unclear", "doubt"}},
        };
        l.abstraction = {{
            {"for example", "for instance", "specifically", "in this case"},
            {"in general", "generally", "pattern", "typically"},
            {"principle", "universally", "fundamentally", "law of"},
        }};
        return l;
    }();
    static const Lexicons zh = [] {
        Lexicons l;
        l.reversal = {"但是", "不过", "等等", "然而", "等一下"};
        l.connectives = {"如果", "那么", "因此", "所以", "因为", "并且", "或者", "不是", "除非", "只有", "要么"};
        l.hypothesis = {"假设", "假如", "设想", "如果是"};
        l.elimination = {"排除", "矛盾", "不可能", "不成立"};
        l.thesis = {"一方面", "有人认为"};
        l.antithesis = {"另一方面", "相反", "反过来"};
        l.synthesis = {"综上", "总之", "综合来看"};
        l.premise_layer = {"前提", "已知", "题干", "推出", "可知"};
        l.deduction_step = {"第一步", "第二步", "第三步", "首先", "其次", "然后", "最后"};
        l.pivot = {"重新考虑", "再检查", "换个思路", "重新审视"};
        l.self_contradiction = {"自相矛盾", "与前面矛盾"};
        l.epistemic = {
            {"certain", {"一定", "肯定", "必然", "显然"}},
            {"probable", {"很可能", "大概"}},
            {"possible", {"也许", "可能", "或许"}},
            {"doubt", {"不确定", "不清楚", "怀疑"}},
        };
        l.abstraction = {{
            {"例如", "比如", "具体来说"},
            {"一般来说", "通常", "规律"},
            {"原则", "本质上", "定律"},
        }};
        return l;
    }();
    return locale == Locale::En ? en : zh;
}

namespace {

bool is_word_byte(unsigned char c) { return c < 0x80 && std::isalnum(c); }

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        const auto u = static_cast<unsigned char>(c);
        if (u < 0x80) c = static_cast<char>(std::tolower(u));
    }
    return out;
}

struct Hit {
    std::size_t pos;
    int group;
};

// Non-overlapping, longest-first marker hits of one word list.
std::vector<std::size_t> find_hits(const std::string& text, const std::vector<std::string>& markers_raw) {
    std::vector<std::string> markers;
    for (const auto& m : markers_raw) {
        if (!m.empty()) markers.push_back(ascii_lower(m));
    }
    std::vector<std::size_t> hits;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t best = 0;
        for (const auto& m : markers) {
            if (m.size() <= best || text.compare(pos, m.size(), m) != 0) continue;
            const auto first = static_cast<unsigned char>(m.front());
            const auto last = static_cast<unsigned char>(m.back());
            if (is_word_byte(first) && pos > 0 && is_word_byte(static_cast<unsigned char>(text[pos - 1]))) continue;
            const std::size_t end = pos + m.size();
            if (is_word_byte(last) && end < text.size() && is_word_byte(static_cast<unsigned char>(text[end]))) {
                continue;
            }
            best = m.size();
        }
        if (best > 0) {
            hits.push_back(pos);
            pos += best;
        } else {
            ++pos;
        }
    }
    return hits;
}

std::vector<Hit> merged_hits(const std::string& text, std::initializer_list<const std::vector<std::string>*> groups) {
    std::vector<Hit> out;
    int g = 0;
    for (const auto* list : groups) {
        for (std::size_t p : find_hits(text, *list)) out.push_back({p, g});
        ++g;
    }
    std::stable_sort(out.begin(), out.end(), [](const Hit& a, const Hit& b) { return a.pos < b.pos; });
    return out;
}

std::size_t count_segments(std::string_view text) {
    std::size_t segments = 0;
    bool in_segment = false;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i < text.size() && text[i] != '\n') continue;
        const bool blank = trim(text.substr(start, i - start)).empty();
        if (!blank && !in_segment) ++segments;
        in_segment = !blank;
        start = i + 1;
    }
    return segments;
}

}  // namespace

MetricVector CognitiveMetrics::scored() const {
    return {oscillation,  logic_density,       abductive_depth, dialectic_tension, dimensional_awareness,
            chain_length, uncertainty_entropy, pivot_count,     abstraction};
}

CognitiveMetrics extract_metrics(const ThinkingTrace& trace, const Lexicons& lex) {
    CognitiveMetrics m;
    const std::string text = ascii_lower(trace.text);
    const std::size_t tokens = trace.token_count();
    if (tokens == 0) return m;

    m.oscillation = static_cast<double>(find_hits(text, lex.reversal).size());
    m.logic_density = 100.0 * static_cast<double>(find_hits(text, lex.connectives).size()) /
                      static_cast<double>(std::max<std::size_t>(1, tokens));

    bool open = false;
    for (const Hit& h : merged_hits(text, {&lex.hypothesis, &lex.elimination})) {
        if (h.group == 0) {
            open = true;
        } else if (open) {
            m.abductive_depth += 1;
            open = false;
        }
    }

    int stage = 0;
    for (const Hit& h : merged_hits(text, {&lex.thesis, &lex.antithesis, &lex.synthesis})) {
        if (h.group == 0 && stage == 0) {
            stage = 1;
        } else if (h.group == 1 && stage == 1) {
            stage = 2;
        } else if (h.group == 2 && stage == 2) {
            m.dialectic_tension += 1;
            stage = 0;
        }
    }

    m.dimensional_awareness = static_cast<double>(find_hits(text, lex.premise_layer).size());
    m.chain_length = static_cast<double>(find_hits(text, lex.deduction_step).size());

    std::vector<double> class_hits;
    for (const auto& [name, markers] : lex.epistemic) {
        class_hits.push_back(static_cast<double>(find_hits(text, markers).size()));
    }
    double total = 0;
    for (double c : class_hits) total += c;
    if (total > 0) {
        for (double c : class_hits) {
            if (c > 0) m.uncertainty_entropy -= (c / total) * std::log(c / total);
        }
    }

    m.pivot_count = static_cast<double>(find_hits(text, lex.pivot).size());
    for (int level = 3; level >= 1; --level) {
        if (!find_hits(text, lex.abstraction[static_cast<std::size_t>(level - 1)]).empty()) {
            m.abstraction = level;
            break;
        }
    }
    m.thinking_length = static_cast<double>(tokens);
    m.segments = static_cast<double>(count_segments(trace.text));
    return m;
}

Normalized z_normalize(const std::vector<CognitiveMetrics>& corpus) {
    if (corpus.size() < 2) throw ConfigError("insufficient corpus: z-normalization needs at least 2 traces");
    Normalized out;
    out.stats.size = corpus.size();
    const double n = static_cast<double>(corpus.size());
    for (const auto& m : corpus) {
        const MetricVector v = m.scored();
        for (std::size_t k = 0; k < kMetricCount; ++k) out.stats.mean[k] += v[k];
    }
    for (double& x : out.stats.mean) x /= n;
    for (const auto& m : corpus) {
        const MetricVector v = m.scored();
        for (std::size_t k = 0; k < kMetricCount; ++k) {
            const double d = v[k] - out.stats.mean[k];
            out.stats.stddev[k] += d * d;
        }
    }
    for (double& x : out.stats.stddev) x = std::sqrt(x / n);
    out.z.reserve(corpus.size());
    for (const auto& m : corpus) out.z.push_back(z_normalize(m, out.stats));
    return out;
}

MetricVector z_normalize(const CognitiveMetrics& metrics, const CorpusStats& stats) {
    MetricVector z{};
    const MetricVector v = metrics.scored();
    for (std::size_t k = 0; k < kMetricCount; ++k) {
        z[k] = (v[k] - stats.mean[k]) / std::max(stats.stddev[k], kStdFloor);
    }
    return z;
}

ScoringConfig ScoringConfig::from_json(const nlohmann::json& j) {
    ScoringConfig cfg;
    if (!j.contains("weights") || !j["weights"].is_object()) throw ConfigError("scoring config: missing 'weights'");
    for (std::size_t k = 0; k < kMetricCount; ++k) {
        const std::string name(kMetricNames[k]);
        if (!j["weights"].contains(name)) throw ConfigError("scoring config: missing weight for '" + name + "'");
        cfg.weights[k] = j["weights"][name].get<double>();
    }
    cfg.penalty_rate = j.value("penalty_rate", cfg.penalty_rate);
    cfg.offset = j.value("offset", cfg.offset);
    if (cfg.penalty_rate < 0) throw ConfigError("scoring config: penalty_rate must be >= 0");
    return cfg;
}

nlohmann::json ScoringConfig::to_json() const {
    nlohmann::json w = nlohmann::json::object();
    for (std::size_t k = 0; k < kMetricCount; ++k) w[std::string(kMetricNames[k])] = weights[k];
    return {{"weights", w}, {"penalty_rate", penalty_rate}, {"offset", offset}};
}

Tier stratify(double value) {
    if (value < 20.0) return Tier::Easy;
    if (value < 25.0) return Tier::Medium;
    if (value < 30.0) return Tier::Hard;
    return Tier::Expert;
}

GoldScore gold_score(const MetricVector& z, const ScoringConfig& config, double fallacy_score) {
    if (fallacy_score < 0) throw std::invalid_argument("fallacy score must be >= 0");
    GoldScore s;
    s.components = z;
    double sum = 0;
    for (std::size_t k = 0; k < kMetricCount; ++k) sum += config.weights[k] * z[k];
    s.penalty = config.penalty_rate * fallacy_score;
    s.value = config.offset + sum - s.penalty;
    s.tier = stratify(s.value);
    return s;
}

double fallacy_penalty(const ThinkingTrace& trace, const Lexicons& lexicons) {
    double r = static_cast<double>(find_hits(ascii_lower(trace.text), lexicons.self_contradiction).size());

    const ParsedAnswer final_answer = parse_answer(trace.text, letters_up_to(8));
    if (!final_answer.ok) return r;
    static const std::regex claim(
        R"((?:[Aa]nswer (?:is|would be|must be)|答案是|答案为)\s*:?\s*\**\s*\(?([A-H])\)?(?![A-Za-z]))");
    for (auto it = std::sregex_iterator(trace.text.begin(), trace.text.end(), claim); it != std::sregex_iterator();
         ++it) {
        const char letter = (*it)[1].str().front();
        // "Suppose the answer is B" is a hypothesis, not a claim.
        const auto at = static_cast<std::size_t>(it->position());
        const std::size_t stop = trace.text.find_last_of(".!?\n", at == 0 ? 0 : at - 1);
        const std::size_t begin = stop == std::string::npos || at == 0 ? 0 : stop + 1;
        if (!find_hits(ascii_lower(trace.text.substr(begin, at - begin)), lexicons.hypothesis).empty()) continue;
        if (!std::binary_search(final_answer.letters.begin(), final_answer.letters.end(), letter)) r += 1;
    }
    return r;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

nlohmann::json list(const std::vector<std::string>& v) { return v; }

std::vector<std::string> read_list(const nlohmann::json& j, const char* key) {
    if (!j.contains(key)) throw ConfigError(std::string("lexicon file: missing '") + key + "'");
    return j.at(key).get<std::vector<std::string>>();
}

}  // namespace

nlohmann::json lexicons_to_json(const Lexicons& l) {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["reversal"] = list(l.reversal);
    j["connectives"] = list(l.connectives);
    j["hypothesis"] = list(l.hypothesis);
    j["elimination"] = list(l.elimination);
    j["thesis"] = list(l.thesis);
    j["antithesis"] = list(l.antithesis);
    j["synthesis"] = list(l.synthesis);
    j["premise_layer"] = list(l.premise_layer);
    j["deduction_step"] = list(l.deduction_step);
    j["pivot"] = list(l.pivot);
    j["self_contradiction"] = list(l.self_contradiction);
    j["epistemic"] = l.epistemic;
    j["abstraction"] = {l.abstraction[0], l.abstraction[1], l.abstraction[2]};
    return j;
}

Lexicons lexicons_from_json(const nlohmann::json& j) {
    Lexicons l;
    l.reversal = read_list(j, "reversal");
    l.connectives = read_list(j, "connectives");
    l.hypothesis = read_list(j, "hypothesis");
    l.elimination = read_list(j, "elimination");
    l.thesis = read_list(j, "thesis");
    l.antithesis = read_list(j, "antithesis");
    l.synthesis = read_list(j, "synthesis");
    l.premise_layer = read_list(j, "premise_layer");
    l.deduction_step = read_list(j, "deduction_step");
    l.pivot = read_list(j, "pivot");
    l.self_contradiction = read_list(j, "self_contradiction");
    if (!j.contains("epistemic")) throw ConfigError("lexicon file: missing 'epistemic'");
    l.epistemic = j.at("epistemic").get<std::map<std::string, std::vector<std::string>>>();
    const auto& abs = j.at("abstraction");
    if (!abs.is_array() || abs.size() != 3) throw ConfigError("lexicon file: 'abstraction' needs three levels");
    for (std::size_t k = 0; k < 3; ++k) l.abstraction[k] = abs[k].get<std::vector<std::string>>();
    return l;
}

nlohmann::json stats_to_json(const CorpusStats& stats, const ScoringConfig& config) {
    nlohmann::json metrics = nlohmann::json::object();
    for (std::size_t k = 0; k < kMetricCount; ++k) {
        metrics[std::string(kMetricNames[k])] = {{"mean", stats.mean[k]}, {"std", stats.stddev[k]}};
    }
    return {{"schema_version", kSchemaVersion},
            {"size", stats.size},
            {"metrics", metrics},
            {"std_floor", kStdFloor},
            {"config", config.to_json()}};
}

CorpusStats stats_from_json(const nlohmann::json& j) {
    CorpusStats s;
    s.size = j.at("size").get<std::size_t>();
    for (std::size_t k = 0; k < kMetricCount; ++k) {
        const std::string name(kMetricNames[k]);
        if (!j.at("metrics").contains(name)) throw ConfigError("corpus stats: missing metric '" + name + "'");
        s.mean[k] = j["metrics"][name].at("mean").get<double>();
        s.stddev[k] = j["metrics"][name].at("std").get<double>();
    }
    return s;
}

nlohmann::json metrics_to_json(const CognitiveMetrics& m) {
    nlohmann::json j;
    const MetricVector v = m.scored();
    for (std::size_t k = 0; k < kMetricCount; ++k) j[std::string(kMetricNames[k])] = v[k];
    j["thinking_length"] = m.thinking_length;
    j["segments"] = m.segments;
    return j;
}

}  // namespace logihard
