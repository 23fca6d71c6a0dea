#include "logihard/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace logihard {

namespace {

void check_version(const nlohmann::json& j, const std::string& what) {
    const int v = j.value("schema_version", 1);
    if (v > kSchemaVersion) {
        throw ConfigError(what + ": schema_version " + std::to_string(v) + " is newer than supported (" +
                          std::to_string(kSchemaVersion) + ")");
    }
}

std::string record_name(const nlohmann::json& j) {
    if (j.is_object()) {
        for (const char* key : {"id", "item_id", "question_id"}) {
            if (j.contains(key) && j[key].is_string()) return "'" + j[key].get<std::string>() + "'";
        }
    }
    return "record";
}

template <typename F>
auto guarded(const nlohmann::json& j, const char* kind, F&& body) {
    try {
        check_version(j, kind);
        return body();
    } catch (const nlohmann::json::exception& ex) {
        throw ConfigError(std::string(kind) + " " + record_name(j) + ": " + ex.what());
    } catch (const std::invalid_argument& ex) {
        throw ConfigError(std::string(kind) + " " + record_name(j) + ": " + ex.what());
    }
}

PropVar answer_from_json(const nlohmann::json& j) {
    const std::string s = j.get<std::string>();
    if (auto v = parse_roman(s)) return *v;
    if (s.size() == 1 && s[0] >= 'A' && s[0] <= 'D') return var_from_index(s[0] - 'A');
    throw std::invalid_argument("answer must be one of I, II, III, IV");
}

Locale locale_from_json(const nlohmann::json& j, const char* key) {
    if (!j.contains(key)) return Locale::En;
    const std::string s = j[key].get<std::string>();
    if (auto l = parse_locale(s)) return *l;
    throw std::invalid_argument("unknown language '" + s + "'");
}

template <typename T>
void put_optional(nlohmann::json& j, const char* key, const std::optional<T>& v) {
    if (v) j[key] = *v;
}

std::optional<double> get_number(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    return j[key].get<double>();
}

nlohmann::json records_of(const nlohmann::json& doc, const std::filesystem::path& path) {
    if (doc.is_array()) return doc;
    if (doc.is_object() && doc.contains("records") && doc["records"].is_array()) {
        check_version(doc, path.string());
        return doc["records"];
    }
    throw ConfigError(path.string() + ": expected a JSON array of records");
}

}  // namespace

nlohmann::json to_json(const ItemFeatures& f) {
    nlohmann::json j = nlohmann::json::object();
    put_optional(j, "gold_score", f.gold_score);
    put_optional(j, "logic_density", f.logic_density);
    put_optional(j, "thinking_length", f.thinking_length);
    put_optional(j, "segments", f.segments);
    if (f.cognitive_tier) j["cognitive_tier"] = tier_name(*f.cognitive_tier);
    return j;
}

ItemFeatures features_from_json(const nlohmann::json& j) {
    ItemFeatures f;
    f.gold_score = get_number(j, "gold_score");
    f.logic_density = get_number(j, "logic_density");
    f.thinking_length = get_number(j, "thinking_length");
    f.segments = get_number(j, "segments");
    if (j.contains("cognitive_tier") && !j["cognitive_tier"].is_null()) {
        f.cognitive_tier = tier_from_string(j["cognitive_tier"].get<std::string>());
    }
    return f;
}

nlohmann::json to_json(const AtomicQuestion& q) {
    nlohmann::json options = nlohmann::json::object();
    for (std::size_t i = 0; i < q.options.size() && i < 4; ++i) {
        options[std::string(roman(var_from_index(static_cast<int>(i))))] = q.options[i];
    }
    nlohmann::json j = {{"schema_version", kSchemaVersion},
                        {"id", q.id},
                        {"context", q.context},
                        {"options", options},
                        {"answer", roman(q.answer)},
                        {"language", locale_name(q.language)},
                        {"source", q.source},
                        {"reasoning_type", q.reasoning_type}};
    if (q.features) j["features"] = to_json(*q.features);
    return j;
}

AtomicQuestion atomic_from_json(const nlohmann::json& j) {
    return guarded(j, "atomic question", [&] {
        AtomicQuestion q;
        q.id = j.at("id").get<std::string>();
        q.context = j.at("context").get<std::string>();
        const auto& opts = j.at("options");
        if (opts.is_array()) {
            q.options = opts.get<std::vector<std::string>>();
        } else {
            if (opts.size() != 4) throw std::invalid_argument("not four atomic options");
            for (PropVar v : kAllVars) q.options.push_back(opts.at(std::string(roman(v))).get<std::string>());
        }
        if (q.options.size() != 4) throw std::invalid_argument("not four atomic options");
        q.answer = answer_from_json(j.at("answer"));
        q.language = locale_from_json(j, "language");
        q.source = j.value("source", "");
        q.reasoning_type = j.value("reasoning_type", "");
        if (j.contains("features") && !j["features"].is_null()) q.features = features_from_json(j["features"]);
        return q;
    });
}

nlohmann::json to_json(const CombinatorialQuestion& q) {
    nlohmann::json statements = nlohmann::json::object();
    for (PropVar v : kAllVars) statements[std::string(roman(v))] = q.statements[index_of(v)];
    nlohmann::json options = nlohmann::json::array();
    for (const auto& o : q.options) {
        options.push_back({{"letter", std::string(1, o.letter)},
                           {"formula", o.formula.serialize()},
                           {"text", o.text},
                           {"kind", pattern_kind_name(o.kind)}});
    }
    std::vector<std::string> answer;
    for (char c : q.answer_set) answer.emplace_back(1, c);
    nlohmann::json j = {{"schema_version", kSchemaVersion},
                        {"id", q.id},
                        {"source_id", q.source_id},
                        {"context", q.context},
                        {"statements", statements},
                        {"options", options},
                        {"answer_set", answer},
                        {"tier", tier_name(q.tier)},
                        {"seed", q.seed},
                        {"source_answer", roman(q.source_answer)},
                        {"source_answer_text", q.source_answer_text},
                        {"language", locale_name(q.language)},
                        {"source", q.source},
                        {"reasoning_type", q.reasoning_type}};
    if (q.features) j["features"] = to_json(*q.features);
    return j;
}

CombinatorialQuestion combinatorial_from_json(const nlohmann::json& j) {
    return guarded(j, "combinatorial question", [&] {
        CombinatorialQuestion q;
        q.id = j.at("id").get<std::string>();
        q.source_id = j.at("source_id").get<std::string>();
        q.context = j.at("context").get<std::string>();
        for (PropVar v : kAllVars) q.statements[index_of(v)] = j.at("statements").at(std::string(roman(v)));
        for (const auto& o : j.at("options")) {
            const std::string letter = o.at("letter").get<std::string>();
            if (letter.size() != 1) throw std::invalid_argument("option letter must be one character");
            const Formula f = Formula::parse(o.at("formula").get<std::string>());
            const std::string kind_name = o.at("kind").get<std::string>();
            const auto kind = parse_pattern_kind(kind_name);
            if (!kind) throw std::invalid_argument("unknown pattern kind '" + kind_name + "'");
            q.options.push_back({letter[0], f, o.at("text").get<std::string>(), *kind});
        }
        for (const auto& a : j.at("answer_set")) {
            const std::string s = a.get<std::string>();
            if (s.size() != 1) throw std::invalid_argument("answer letter must be one character");
            q.answer_set.push_back(s[0]);
        }
        std::sort(q.answer_set.begin(), q.answer_set.end());
        q.tier = tier_from_string(j.at("tier").get<std::string>());
        q.seed = j.at("seed").get<std::uint64_t>();
        q.source_answer = answer_from_json(j.at("source_answer"));
        q.source_answer_text = j.value("source_answer_text", "");
        q.language = locale_from_json(j, "language");
        q.source = j.value("source", "");
        q.reasoning_type = j.value("reasoning_type", "");
        if (j.contains("features") && !j["features"].is_null()) q.features = features_from_json(j["features"]);
        return q;
    });
}

nlohmann::json to_json(const ItemParams& p) {
    return {{"schema_version", kSchemaVersion}, {"item_id", p.item_id}, {"a", p.a},
            {"b", p.b},                         {"c", p.c},             {"subset", subset_name(p.subset)}};
}

ItemParams params_from_json(const nlohmann::json& j) {
    return guarded(j, "item", [&] {
        ItemParams p;
        p.item_id = j.at("item_id").get<std::string>();
        p.a = j.at("a").get<double>();
        p.b = j.at("b").get<double>();
        p.c = j.at("c").get<double>();
        p.subset = subset_from_string(j.at("subset").get<std::string>());
        p.validate();
        return p;
    });
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& ex) {
        throw ConfigError(path.string() + ": " + ex.what());
    }
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& value) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << value.dump(2) << '\n';
}

std::vector<AtomicQuestion> load_atomic_bank(const std::filesystem::path& path) {
    std::vector<AtomicQuestion> out;
    for (const auto& r : records_of(read_json_file(path), path)) out.push_back(atomic_from_json(r));
    return out;
}

std::vector<CombinatorialQuestion> load_combinatorial_bank(const std::filesystem::path& path) {
    std::vector<CombinatorialQuestion> out;
    for (const auto& r : records_of(read_json_file(path), path)) out.push_back(combinatorial_from_json(r));
    return out;
}

std::vector<ItemParams> load_item_bank(const std::filesystem::path& path) {
    std::vector<ItemParams> out;
    for (const auto& r : records_of(read_json_file(path), path)) out.push_back(params_from_json(r));
    return out;
}

std::vector<ThinkingTrace> load_traces(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    std::vector<ThinkingTrace> out;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (trim(line).empty()) continue;
        try {
            const auto j = nlohmann::json::parse(line);
            check_version(j, "trace");
            out.push_back({j.at("question_id").get<std::string>(), j.at("text").get<std::string>()});
        } catch (const nlohmann::json::exception& ex) {
            throw ConfigError(path.string() + ":" + std::to_string(n) + ": " + ex.what());
        }
    }
    return out;
}

}  // namespace logihard
