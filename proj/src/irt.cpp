#include "logihard/irt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace logihard {

std::string_view subset_name(Subset s) { return s == Subset::Base ? "base" : "comb"; }

Subset subset_from_string(std::string_view name) {
    if (name == "base") return Subset::Base;
    if (name == "comb" || name == "combinatorial") return Subset::Combinatorial;
    throw std::invalid_argument("unknown subset '" + std::string(name) + "'");
}

void ItemParams::validate() const {
    if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("item '" + item_id + "': a must be > 0");
    if (!std::isfinite(b)) throw std::invalid_argument("item '" + item_id + "': b must be finite");
    if (!(c >= 0.0 && c < 1.0)) throw std::invalid_argument("item '" + item_id + "': c must be in [0, 1)");
}

double probability_3pl(double theta, const ItemParams& item) {
    return item.c + (1.0 - item.c) / (1.0 + std::exp(-item.a * (theta - item.b)));
}

double fisher_information(double theta, const ItemParams& item, InformationModel model) {
    const double p = probability_3pl(theta, item);
    const double a2 = item.a * item.a;
    if (model == InformationModel::Quoted) return a2 * p * (1.0 - p);
    const double ratio = (p - item.c) / (1.0 - item.c);
    return a2 * ratio * ratio * (1.0 - p) / p;
}

// ---------------------------------------------------------------------------
// Grid and posterior

QuadratureGrid::QuadratureGrid() {
    constexpr int half = (kNodes - 1) / 2;
    for (int k = 0; k < kNodes; ++k) {
        // (k - 30) / 5 keeps the centre node exactly 0 and the grid symmetric.
        nodes_[k] = static_cast<double>(k - half) / 5.0;
        prior_[k] = std::exp(-0.5 * nodes_[k] * nodes_[k]);
    }
    const double total = std::accumulate(prior_.begin(), prior_.end(), 0.0);
    for (double& w : prior_) w /= total;
}

const QuadratureGrid& QuadratureGrid::standard() {
    static const QuadratureGrid grid;
    return grid;
}

CatSession CatSession::start(Subset subset) {
    CatSession s;
    s.subset = subset;
    const auto prior = QuadratureGrid::standard().prior();
    s.posterior.assign(prior.begin(), prior.end());
    s.estimate = summarize(QuadratureGrid::standard().nodes(), s.posterior, 0);
    return s;
}

void CatSession::mark_skipped(const std::string& item_id) {
    skipped.push_back(item_id);
    seen.insert(item_id);
}

AbilityEstimate summarize(std::span<const double> nodes, std::span<const double> weights, int n_administered) {
    double mean = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) mean += nodes[k] * weights[k];
    double var = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        const double d = nodes[k] - mean;
        var += weights[k] * d * d;
    }
    return {mean, std::sqrt(var), n_administered};
}

void eap_update_in_place(CatSession& session, const ItemParams& item, bool correct) {
    if (!session.seen.insert(item.item_id).second) {
        throw std::invalid_argument("item '" + item.item_id + "' already administered in this session");
    }
    const auto nodes = QuadratureGrid::standard().nodes();
    double total = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        const double p = probability_3pl(nodes[k], item);
        session.posterior[k] *= correct ? p : 1.0 - p;
        total += session.posterior[k];
    }
    for (double& w : session.posterior) w /= total;
    session.administered.push_back({item.item_id, correct});
    session.estimate = summarize(nodes, session.posterior, static_cast<int>(session.administered.size()));
}

CatSession eap_update(CatSession session, const ItemParams& item, bool correct) {
    eap_update_in_place(session, item, correct);
    return session;
}

// ---------------------------------------------------------------------------
// Selection and termination

namespace {

bool eligible(const CatSession& session, const ItemParams& item) {
    return item.subset == session.subset && !session.has_seen(item.item_id);
}

}  // namespace

bool has_eligible(const CatSession& session, std::span<const ItemParams> bank) {
    return std::any_of(bank.begin(), bank.end(), [&](const ItemParams& it) { return eligible(session, it); });
}

const ItemParams& select_next(const CatSession& session, std::span<const ItemParams> bank, InformationModel model) {
    const ItemParams* best = nullptr;
    double best_info = -1.0;
    for (const ItemParams& item : bank) {
        if (!eligible(session, item)) continue;
        const double info = fisher_information(session.estimate.theta_hat, item, model);
        if (info > best_info || (info == best_info && item.item_id < best->item_id)) {
            best = &item;
            best_info = info;
        }
    }
    if (best == nullptr) throw BankExhausted();
    return *best;
}

const ItemParams& select_random(const CatSession& session, std::span<const ItemParams> bank, Rng& rng) {
    std::vector<const ItemParams*> pool;
    for (const ItemParams& item : bank) {
        if (eligible(session, item)) pool.push_back(&item);
    }
    if (pool.empty()) throw BankExhausted();
    return *pool[rng.below(pool.size())];
}

bool should_terminate(const CatSession& session, const CatConfig& config, bool bank_exhausted) {
    return session.estimate.se < config.se_target || session.estimate.n_administered >= config.max_items ||
           bank_exhausted;
}

// ---------------------------------------------------------------------------
// Calibration

double calibrate_difficulty(double gold_score, double logic_density, double thinking_length, double segments) {
    if (!std::isfinite(gold_score) || !std::isfinite(logic_density) || !std::isfinite(thinking_length) ||
        !std::isfinite(segments)) {
        throw std::invalid_argument("calibrate_difficulty: non-finite input");
    }
    if (thinking_length < 0 || segments < 0) {
        throw std::invalid_argument("calibrate_difficulty: thinking length and segments must be >= 0");
    }
    return (gold_score - 72.0) / 54.0 + 0.1 * (logic_density - 2.0) + std::log10(std::max(1.0, thinking_length)) -
           3.17 + (segments - 100.0) / 200.0;
}

double discrimination_for_tier(Tier tier) {
    switch (tier) {
        case Tier::Easy: return 0.8;
        case Tier::Medium: return 1.2;
        case Tier::Hard: return 1.6;
        case Tier::Expert: return 2.0;
    }
    return 1.0;
}

double guessing_for_options(int option_count) {
    if (option_count < 2) throw std::invalid_argument("guessing_for_options: need at least 2 options");
    return 1.0 / static_cast<double>(option_count);
}

// ---------------------------------------------------------------------------
// Sessions

SessionResult run_session(Subset subset, ItemResponder& responder, std::span<const ItemParams> bank,
                          const CatConfig& config, std::uint64_t selection_seed) {
    SessionResult result;
    result.session = CatSession::start(subset);
    CatSession& s = result.session;
    Rng rng(selection_seed);
    int step = 0;
    int correct = 0;
    while (true) {
        const bool exhausted = !has_eligible(s, bank);
        if (should_terminate(s, config, exhausted)) {
            result.bank_exhausted = exhausted;
            break;
        }
        const ItemParams& item = config.selection == SelectionRule::MaxInformation
                                     ? select_next(s, bank, config.information)
                                     : select_random(s, bank, rng);
        ++step;
        std::optional<bool> response = responder.answer(item);
        if (!response && !config.skip_failures) response = false;
        if (response) {
            eap_update_in_place(s, item, *response);
            correct += *response ? 1 : 0;
        } else {
            s.mark_skipped(item.item_id);
        }
        result.steps.push_back({subset, step, item, response, s.estimate.theta_hat, s.estimate.se});
    }
    const int n = s.estimate.n_administered;
    result.accuracy = n > 0 ? static_cast<double>(correct) / n : 0.0;
    return result;
}

double DualReport::combined_se() const { return std::sqrt(base.se * base.se + comb.se * comb.se); }

DualReport run_dual_session(ItemResponder& responder, std::span<const ItemParams> base_bank,
                            std::span<const ItemParams> comb_bank, const CatConfig& config,
                            std::uint64_t selection_seed) {
    SessionResult base = run_session(Subset::Base, responder, base_bank, config, mix_seed(selection_seed, 0));
    SessionResult comb =
        run_session(Subset::Combinatorial, responder, comb_bank, config, mix_seed(selection_seed, 1));
    DualReport r;
    r.base = base.session.estimate;
    r.comb = comb.session.estimate;
    r.delta_theta = r.base.theta_hat - r.comb.theta_hat;
    r.base_accuracy = base.accuracy;
    r.comb_accuracy = comb.accuracy;
    r.base_skipped = static_cast<int>(base.session.skipped.size());
    r.comb_skipped = static_cast<int>(comb.session.skipped.size());
    r.steps = std::move(base.steps);
    r.steps.insert(r.steps.end(), comb.steps.begin(), comb.steps.end());
    return r;
}

}  // namespace logihard
