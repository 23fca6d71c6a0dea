#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "logihard/cognitive.hpp"
#include "logihard/irt.hpp"
#include "logihard/synthesis.hpp"

namespace logihard {

// Record <-> JSON. Readers throw ConfigError naming the offending record and
// accept a missing schema_version as version 1; newer versions are rejected.
nlohmann::json to_json(const ItemFeatures& f);
ItemFeatures features_from_json(const nlohmann::json& j);

nlohmann::json to_json(const AtomicQuestion& q);
AtomicQuestion atomic_from_json(const nlohmann::json& j);

nlohmann::json to_json(const CombinatorialQuestion& q);
CombinatorialQuestion combinatorial_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ItemParams& p);
ItemParams params_from_json(const nlohmann::json& j);

// Whole-file helpers. Bank files are JSON arrays of records; an object with
// a "records" array is also read.
nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& value);

std::vector<AtomicQuestion> load_atomic_bank(const std::filesystem::path& path);
std::vector<CombinatorialQuestion> load_combinatorial_bank(const std::filesystem::path& path);
std::vector<ItemParams> load_item_bank(const std::filesystem::path& path);

template <typename T>
nlohmann::json bank_to_json(const std::vector<T>& records) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : records) out.push_back(to_json(r));
    return out;
}

// JSONL of {question_id, text}. Blank lines are ignored; malformed lines throw.
std::vector<ThinkingTrace> load_traces(const std::filesystem::path& path);

}  // namespace logihard
