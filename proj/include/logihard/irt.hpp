#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "logihard/common.hpp"

namespace logihard {

enum class Subset : std::uint8_t { Base, Combinatorial };

std::string_view subset_name(Subset s);  // "base" / "comb"
Subset subset_from_string(std::string_view name);

struct ItemParams {
    std::string item_id;
    double a = 1.0;  // discrimination > 0
    double b = 0.0;  // difficulty
    double c = 0.0;  // pseudo-guessing in [0, 1)
    Subset subset = Subset::Base;

    // Throws std::invalid_argument when a <= 0 or c outside [0, 1).
    void validate() const;
};

// c + (1 - c) / (1 + exp(-a (theta - b)))
double probability_3pl(double theta, const ItemParams& item);

enum class InformationModel : std::uint8_t {
    Quoted,  // a^2 P (1 - P)
    Exact,   // a^2 [(P - c) / (1 - c)]^2 (1 - P) / P
};

double fisher_information(double theta, const ItemParams& item, InformationModel model = InformationModel::Quoted);

// Fixed EAP grid: 61 equally spaced nodes on [-6, 6] with standard-normal
// prior weights normalized to sum 1.
class QuadratureGrid {
public:
    static constexpr int kNodes = 61;
    static constexpr double kLower = -6.0;
    static constexpr double kUpper = 6.0;

    static const QuadratureGrid& standard();

    std::span<const double> nodes() const { return nodes_; }
    std::span<const double> prior() const { return prior_; }

private:
    QuadratureGrid();
    std::array<double, kNodes> nodes_{};
    std::array<double, kNodes> prior_{};
};

struct AbilityEstimate {
    double theta_hat = 0.0;
    double se = 1.0;
    int n_administered = 0;
};

struct Administered {
    std::string item_id;
    bool correct;
};

struct CatSession {
    Subset subset = Subset::Base;
    std::vector<double> posterior;
    std::vector<Administered> administered;
    std::vector<std::string> skipped;  // responder failures, never re-offered
    AbilityEstimate estimate;
    std::unordered_set<std::string> seen;  // administered or skipped ids

    // Prior-only session on the standard grid.
    static CatSession start(Subset subset);
    bool has_seen(const std::string& item_id) const { return seen.count(item_id) > 0; }
    void mark_skipped(const std::string& item_id);
};

// Posterior mean and standard deviation over the grid.
AbilityEstimate summarize(std::span<const double> nodes, std::span<const double> weights, int n_administered);

// Multiplies in the item likelihood and renormalizes. Throws
// std::invalid_argument if the item was already administered.
CatSession eap_update(CatSession session, const ItemParams& item, bool correct);
void eap_update_in_place(CatSession& session, const ItemParams& item, bool correct);

enum class SelectionRule : std::uint8_t { MaxInformation, Random };

class BankExhausted : public std::runtime_error {
public:
    BankExhausted() : std::runtime_error("bank exhausted") {}
};

// Highest information at the current estimate among items of the session's
// subset not yet administered or skipped; ties go to the smallest item_id.
const ItemParams& select_next(const CatSession& session, std::span<const ItemParams> bank,
                              InformationModel model = InformationModel::Quoted);
const ItemParams& select_random(const CatSession& session, std::span<const ItemParams> bank, Rng& rng);
bool has_eligible(const CatSession& session, std::span<const ItemParams> bank);

struct CatConfig {
    int max_items = 60;
    double se_target = 0.3;
    InformationModel information = InformationModel::Quoted;
    SelectionRule selection = SelectionRule::MaxInformation;
    // When false, a responder failure is scored as incorrect instead of skipped.
    bool skip_failures = true;
};

bool should_terminate(const CatSession& session, const CatConfig& config, bool bank_exhausted = false);

// Throws std::invalid_argument on non-finite input or negative L / sigma.
double calibrate_difficulty(double gold_score, double logic_density, double thinking_length, double segments);
double discrimination_for_tier(Tier tier);
double guessing_for_options(int option_count);  // throws for m < 2

// Answers an administered item; nullopt means the response failed.
class ItemResponder {
public:
    virtual ~ItemResponder() = default;
    virtual std::optional<bool> answer(const ItemParams& item) = 0;
};

// Correct with probability probability_3pl(theta*, item), with a separate
// true ability and random stream per subset.
class SimulatedRespondent final : public ItemResponder {
public:
    SimulatedRespondent(double theta_base, double theta_comb, std::uint64_t seed)
        : theta_{theta_base, theta_comb}, rng_{Rng(mix_seed(seed, 0)), Rng(mix_seed(seed, 1))} {}
    explicit SimulatedRespondent(double theta, std::uint64_t seed) : SimulatedRespondent(theta, theta, seed) {}

    std::optional<bool> answer(const ItemParams& item) override {
        const auto k = static_cast<std::size_t>(item.subset);
        return rng_[k].bernoulli(probability_3pl(theta_[k], item));
    }

private:
    std::array<double, 2> theta_;
    std::array<Rng, 2> rng_;
};

struct StepLog {
    Subset subset;
    int step;  // 1-based
    ItemParams item;
    std::optional<bool> response;  // nullopt: skipped
    double theta_hat;
    double se;
};

struct SessionResult {
    CatSession session;
    std::vector<StepLog> steps;
    double accuracy = 0.0;  // fraction correct over administered items
    bool bank_exhausted = false;
};

// select -> administer -> update -> terminate? loop for one subset.
SessionResult run_session(Subset subset, ItemResponder& responder, std::span<const ItemParams> bank,
                          const CatConfig& config, std::uint64_t selection_seed = 0);

struct DualReport {
    AbilityEstimate base;
    AbilityEstimate comb;
    double delta_theta = 0.0;  // base - comb
    double base_accuracy = 0.0;
    double comb_accuracy = 0.0;
    int base_skipped = 0;
    int comb_skipped = 0;
    std::vector<StepLog> steps;

    double combined_se() const;
};

// Two independent sessions with standard-normal priors.
DualReport run_dual_session(ItemResponder& responder, std::span<const ItemParams> base_bank,
                            std::span<const ItemParams> comb_bank, const CatConfig& config, std::uint64_t selection_seed = 0);

}  // namespace logihard
