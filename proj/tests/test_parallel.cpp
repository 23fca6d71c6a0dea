#include <gtest/gtest.h>

#include "logihard/parallel.hpp"
#include "support.hpp"

using namespace logihard;
using logihard::testing::sample_question;

TEST(Parallel, SynthesisMatchesSerial) {
    std::vector<AtomicQuestion> qs;
    for (int k = 0; k < 200; ++k) qs.push_back(sample_question(var_from_index(k % 4), "q" + std::to_string(k)));
    std::vector<SynthesisJob> jobs;
    for (int k = 0; k < 200; ++k) {
        jobs.push_back({&qs[k], TierConfig::defaults(static_cast<Tier>(k % 4)), static_cast<std::uint64_t>(k)});
    }
    jobs[7].config = TierConfig::defaults(Tier::Easy, 6);
    const auto s = synthesize_batch(jobs, Execution::Serial);
    const auto p = synthesize_batch(jobs, Execution::Parallel);
    ASSERT_EQ(s.size(), p.size());
    for (std::size_t k = 0; k < s.size(); ++k) {
        EXPECT_EQ(s[k].error, p[k].error);
        ASSERT_EQ(s[k].result.has_value(), p[k].result.has_value());
        if (s[k].result) {
            EXPECT_EQ(s[k].result->question, p[k].result->question);
        }
    }
    EXPECT_FALSE(s[7].result.has_value());
    EXPECT_FALSE(s[7].error.empty());
}

TEST(Parallel, MetricsMatchSerial) {
    std::vector<ThinkingTrace> traces;
    for (int k = 0; k < 300; ++k) {
        std::string text;
        for (int r = 0; r <= k % 9; ++r) text += "Suppose X. However, it fails. Therefore Y.\n\nMaybe. ";
        traces.push_back(ThinkingTrace::make("t" + std::to_string(k), text));
    }
    const auto& lex = Lexicons::defaults(Locale::En);
    EXPECT_EQ(extract_metrics_batch(traces, lex, Execution::Serial), extract_metrics_batch(traces, lex, Execution::Parallel));
}

TEST(Parallel, CatSimulationMatchesSerial) {
    std::vector<ItemParams> bank;
    for (int k = 0; k < 120; ++k) bank.push_back({"i" + std::to_string(k), 1.2 + 0.4 * (k % 3), -3 + 6.0 * k / 119, 0.2});
    std::vector<CatJob> jobs;
    for (int k = 0; k < 64; ++k) jobs.push_back({-2.0 + 4.0 * (k % 5) / 4, static_cast<std::uint64_t>(100 + k)});
    const auto s = simulate_cat_batch(jobs, Subset::Base, bank, CatConfig{}, Execution::Serial);
    const auto p = simulate_cat_batch(jobs, Subset::Base, bank, CatConfig{}, Execution::Parallel);
    ASSERT_EQ(s.size(), jobs.size());
    for (std::size_t k = 0; k < s.size(); ++k) {
        EXPECT_EQ(s[k].estimate.theta_hat, p[k].estimate.theta_hat);
        EXPECT_EQ(s[k].estimate.n_administered, p[k].estimate.n_administered);
        EXPECT_EQ(s[k].accuracy, p[k].accuracy);
    }
    EXPECT_GE(worker_threads(), 1);
}
