#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "logihard/io.hpp"
#include "support.hpp"

using namespace logihard;
using logihard::testing::sample_question;

namespace {

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "logihard_test_io";
    std::filesystem::create_directories(dir);
    return dir / name;
}

bool error_mentions(const std::function<void()>& f, const std::string& needle) {
    try {
        f();
    } catch (const ConfigError& e) {
        return std::string(e.what()).find(needle) != std::string::npos;
    }
    return false;
}

}  // namespace

TEST(Io, AtomicRoundTrip) {
    auto q = sample_question(PropVar::III);
    q.language = Locale::Zh;
    q.features = ItemFeatures{24.5, 1.2, 3000, 12, Tier::Medium};
    EXPECT_EQ(atomic_from_json(to_json(q)), q);
    q.features.reset();
    EXPECT_EQ(atomic_from_json(to_json(q)), q);
}

TEST(Io, AtomicAlternateForms) {
    nlohmann::json j = to_json(sample_question(PropVar::II));
    j["options"] = {"a", "b", "c", "d"};
    j["answer"] = "B";
    j.erase("schema_version");
    const auto q = atomic_from_json(j);
    EXPECT_EQ(q.answer, PropVar::II);
    EXPECT_EQ(q.options[3], "d");
}

TEST(Io, AtomicErrorsNameTheRecord) {
    nlohmann::json j = to_json(sample_question(PropVar::II, "bad-7"));
    j["answer"] = "V";
    EXPECT_TRUE(error_mentions([&] { atomic_from_json(j); }, "bad-7"));
    j = to_json(sample_question(PropVar::II, "bad-8"));
    j["schema_version"] = kSchemaVersion + 1;
    EXPECT_TRUE(error_mentions([&] { atomic_from_json(j); }, "newer than supported"));
    j = to_json(sample_question(PropVar::II, "bad-9"));
    j["options"] = {"a", "b", "c"};
    EXPECT_THROW(atomic_from_json(j), ConfigError);
}

TEST(Io, CombinatorialRoundTrip) {
    for (Tier t : {Tier::Easy, Tier::Medium, Tier::Hard, Tier::Expert}) {
        auto cq = synthesize(sample_question(PropVar::IV), TierConfig::defaults(t), 31).question;
        cq.features = ItemFeatures{31.0, std::nullopt, 100, std::nullopt, Tier::Expert};
        const auto back = combinatorial_from_json(to_json(cq));
        EXPECT_EQ(back, cq);
        EXPECT_TRUE(verify(back).valid);
    }
}

TEST(Io, CombinatorialRejectsBadFormula) {
    auto j = to_json(synthesize(sample_question(PropVar::I), TierConfig::defaults(Tier::Hard), 2).question);
    j["options"][0]["formula"] = "AND(VAR(I)";
    EXPECT_THROW(combinatorial_from_json(j), ConfigError);
}

TEST(Io, ParamsRoundTrip) {
    const ItemParams p{"x1", 1.6, -0.25, 1.0 / 6.0, Subset::Combinatorial};
    const auto back = params_from_json(to_json(p));
    EXPECT_EQ(back.item_id, "x1");
    EXPECT_DOUBLE_EQ(back.a, p.a);
    EXPECT_DOUBLE_EQ(back.b, p.b);
    EXPECT_DOUBLE_EQ(back.c, p.c);
    EXPECT_EQ(back.subset, Subset::Combinatorial);
    nlohmann::json bad = to_json(p);
    bad["c"] = 1.5;
    EXPECT_THROW(params_from_json(bad), ConfigError);
}

TEST(Io, BankFilesArrayAndRecordsObject) {
    std::vector<AtomicQuestion> bank{sample_question(PropVar::I, "a"), sample_question(PropVar::II, "b")};
    const auto arr = scratch("sub/bank.json");
    std::filesystem::remove_all(arr.parent_path());
    write_json_file(arr, bank_to_json(bank));
    EXPECT_EQ(load_atomic_bank(arr), bank);
    const auto obj = scratch("bank_obj.json");
    write_json_file(obj, {{"records", bank_to_json(bank)}});
    EXPECT_EQ(load_atomic_bank(obj), bank);
    EXPECT_THROW(load_atomic_bank(scratch("missing.json")), ConfigError);
    std::ofstream(scratch("broken.json")) << "[{";
    EXPECT_THROW(read_json_file(scratch("broken.json")), ConfigError);
}

TEST(Io, ItemBankFile) {
    const std::vector<ItemParams> ps{{"a", 0.8, 1, 0.25, Subset::Base}, {"b", 2.0, -1, 0.2, Subset::Combinatorial}};
    const auto path = scratch("params.json");
    write_json_file(path, bank_to_json(ps));
    const auto back = load_item_bank(path);
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back[1].item_id, "b");
    EXPECT_EQ(back[1].subset, Subset::Combinatorial);
}

TEST(Io, TracesJsonl) {
    const auto path = scratch("traces.jsonl");
    std::ofstream(path) << "{\"question_id\":\"q1\",\"text\":\"However, so.\"}\n\n{\"question_id\":\"q2\",\"text\":\"\"}\n";
    const auto t = load_traces(path);
    ASSERT_EQ(t.size(), 2u);
    EXPECT_EQ(t[0].question_id, "q1");
    std::ofstream(path) << "{\"question_id\":\"q1\"}\n";
    EXPECT_THROW(load_traces(path), ConfigError);
}

TEST(Io, ShippedSampleBankLoads) {
    const auto bank = load_atomic_bank(std::string(LOGIHARD_SOURCE_DIR) + "/data/sample/atomic_bank.json");
    EXPECT_EQ(bank.size(), 300u);
    for (const auto& q : bank) {
        ASSERT_TRUE(q.features.has_value()) << q.id;
        EXPECT_TRUE(q.features->gold_score.has_value());
    }
}
