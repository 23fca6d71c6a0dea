#include "logihard/synthesis.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace logihard {

namespace {

void check_four_options(const AtomicQuestion& q) {
    if (q.options.size() != 4) {
        throw QuestionError("question '" + q.id + "': not four atomic options (got " +
                            std::to_string(q.options.size()) + ")");
    }
}

std::string declarative(const std::string& option, Locale locale) {
    std::string s = trim(option);
    if (s.empty()) return s;
    const bool has_stop = s.back() == '.' || s.back() == '!' || s.back() == '?' ||
                          s.ends_with("。") || s.ends_with("！") || s.ends_with("？");
    if (!has_stop) s += locale == Locale::Zh ? "。" : ".";
    return s;
}

bool contains(const std::vector<PatternKind>& kinds, PatternKind k) {
    return std::find(kinds.begin(), kinds.end(), k) != kinds.end();
}

PropVar successor(PropVar v) { return var_from_index((index_of(v) + 1) % 4); }

}  // namespace

Atomization atomize(const AtomicQuestion& q) {
    check_four_options(q);
    std::set<std::string> seen;
    for (std::size_t i = 0; i < 4; ++i) {
        const std::string t = trim(q.options[i]);
        if (t.empty()) {
            throw QuestionError("question '" + q.id + "': option " + std::string(roman(var_from_index(int(i)))) +
                                " is empty");
        }
        if (!seen.insert(t).second) {
            throw QuestionError("question '" + q.id + "': duplicate option text '" + t + "'");
        }
    }
    Atomization out;
    for (std::size_t i = 0; i < 4; ++i) out.statements[i] = declarative(q.options[i], q.language);
    out.truth = Assignment::ground_truth(q.answer);
    return out;
}

// ---------------------------------------------------------------------------
// Tier configuration

bool TierConfig::allows(PatternKind kind) const { return contains(allowed, kind); }

TierConfig TierConfig::defaults(Tier tier, std::optional<int> n_options) {
    TierConfig cfg;
    cfg.tier = tier;
    cfg.allowed = {PatternKind::Exactness};
    switch (tier) {
        case Tier::Easy:
            cfg.n_correct_min = cfg.n_correct_max = 1;
            cfg.n_options = n_options.value_or(5);
            break;
        case Tier::Medium:
            cfg.allowed.push_back(PatternKind::Disjunction);
            cfg.n_correct_min = 1;
            cfg.n_correct_max = 2;
            break;
        case Tier::Hard:
            cfg.allowed.push_back(PatternKind::Disjunction);
            cfg.allowed.push_back(PatternKind::Negation);
            cfg.required = {PatternKind::Negation};
            cfg.n_correct_min = 1;
            cfg.n_correct_max = 3;
            break;
        case Tier::Expert:
            cfg.allowed.push_back(PatternKind::Disjunction);
            cfg.allowed.push_back(PatternKind::Negation);
            cfg.allowed.push_back(PatternKind::CompoundNegation);
            cfg.required = {PatternKind::Negation, PatternKind::Disjunction};
            cfg.n_correct_min = 2;
            cfg.n_correct_max = 4;
            break;
    }
    if (tier != Tier::Easy) cfg.n_options = n_options.value_or(6);
    for (PatternKind k : cfg.allowed) cfg.weights[k] = 1.0;
    return cfg;
}

void TierConfig::validate() const {
    if (n_options < 5 || n_options > 8) {
        throw ConfigError("n_options must be in [5, 8], got " + std::to_string(n_options));
    }
    if (n_correct_min < 1 || n_correct_min > n_correct_max || n_correct_max >= n_options) {
        throw ConfigError("n_correct range must satisfy 1 <= min <= max < n_options");
    }
    if (!allows(PatternKind::Exactness)) throw ConfigError("every tier allows exactness");
    for (PatternKind k : required) {
        if (!allows(k)) throw ConfigError("required pattern '" + std::string(pattern_kind_name(k)) + "' not allowed");
    }
    for (PatternKind k : allowed) {
        if (k == PatternKind::Universal) continue;
        const auto it = weights.find(k);
        if (it == weights.end()) {
            throw ConfigError("missing weight for pattern '" + std::string(pattern_kind_name(k)) + "'");
        }
        if (!(it->second > 0.0)) throw ConfigError("pattern weights must be positive");
    }
}

// ---------------------------------------------------------------------------
// Pools

std::vector<Pattern> valid_patterns(const TierConfig& cfg, PropVar a) {
    std::vector<Pattern> pool{Pattern::exactness(a)};
    if (cfg.allows(PatternKind::Disjunction)) {
        for (PropVar j : kAllVars)
            if (j != a) pool.push_back(Pattern::disjunction(a, j));
    }
    if (cfg.allows(PatternKind::Negation)) {
        for (PropVar j : kAllVars)
            if (j != a) pool.push_back(Pattern::negation(j));
    }
    if (cfg.allows(PatternKind::CompoundNegation)) {
        for (int j = 0; j < 4; ++j)
            for (int k = j + 1; k < 4; ++k)
                if (j != index_of(a) && k != index_of(a))
                    pool.push_back(Pattern::compound_negation(var_from_index(j), var_from_index(k)));
    }
    return pool;
}

std::vector<Pattern> distractor_patterns(const TierConfig& cfg, PropVar a) {
    std::vector<Pattern> pool;
    for (PropVar j : kAllVars)
        if (j != a) pool.push_back(Pattern::exactness(j));
    if (cfg.allows(PatternKind::Disjunction)) {
        for (int j = 0; j < 4; ++j)
            for (int k = j + 1; k < 4; ++k)
                if (j != index_of(a) && k != index_of(a))
                    pool.push_back(Pattern::disjunction(var_from_index(j), var_from_index(k)));
    }
    if (cfg.allows(PatternKind::Negation)) pool.push_back(Pattern::negation(a));
    // One false compound negation so the Expert operator is not a giveaway.
    if (cfg.allows(PatternKind::CompoundNegation)) pool.push_back(Pattern::compound_negation(a, successor(a)));
    pool.push_back(Pattern::universal());
    return pool;
}

namespace {

std::vector<Formula> expand_all(const std::vector<Pattern>& patterns) {
    std::vector<Formula> out;
    out.reserve(patterns.size());
    for (const Pattern& p : patterns) out.push_back(p.expand());
    return out;
}

// Removes and returns pool[index].
Pattern take(std::vector<Pattern>& pool, std::size_t index) {
    Pattern p = pool[index];
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(index));
    return p;
}

std::optional<std::size_t> pick_of_kind(const std::vector<Pattern>& pool, PatternKind kind, Rng& rng) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < pool.size(); ++i)
        if (pool[i].kind == kind) idx.push_back(i);
    if (idx.empty()) return std::nullopt;
    return idx[rng.below(idx.size())];
}

std::size_t pick_weighted(const std::vector<Pattern>& pool, const std::map<PatternKind, double>& weights,
                          Rng& rng) {
    std::vector<double> w(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) {
        const auto it = weights.find(pool[i].kind);
        w[i] = it == weights.end() ? 1.0 : it->second;
    }
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    double u = rng.unit() * total;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (u < w[i]) return i;
        u -= w[i];
    }
    return w.size() - 1;
}

[[noreturn]] void infeasible(const TierConfig& cfg, const std::string& detail) {
    throw ConfigError("tier infeasible for this configuration (" + std::string(tier_name(cfg.tier)) +
                      ", m=" + std::to_string(cfg.n_options) + "): " + detail);
}

}  // namespace

std::vector<Formula> generate_valid_pool(const TierConfig& cfg, PropVar a) {
    return expand_all(valid_patterns(cfg, a));
}

std::vector<Formula> generate_distractor_pool(const TierConfig& cfg, PropVar a) {
    return expand_all(distractor_patterns(cfg, a));
}

CombinatorialQuestion assemble(const AtomicQuestion& q, const TierConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    const Atomization atoms = atomize(q);

    std::vector<Pattern> valid = valid_patterns(cfg, q.answer);
    std::vector<Pattern> distractors = distractor_patterns(cfg, q.answer);
    const int m = cfg.n_options;
    if (cfg.n_correct_max > static_cast<int>(valid.size())) {
        infeasible(cfg, "valid pool holds " + std::to_string(valid.size()) + " formulas");
    }
    if (m - cfg.n_correct_min > static_cast<int>(distractors.size())) {
        infeasible(cfg, "distractor pool holds " + std::to_string(distractors.size()) + " formulas");
    }

    Rng rng(seed);
    const int n_correct = rng.between(cfg.n_correct_min, cfg.n_correct_max);
    const int n_wrong = m - n_correct;

    std::vector<Pattern> correct;
    std::vector<Pattern> wrong;
    for (PatternKind kind : cfg.required) {
        const auto present = [kind](const std::vector<Pattern>& v) {
            return std::any_of(v.begin(), v.end(), [kind](const Pattern& p) { return p.kind == kind; });
        };
        if (present(correct) || present(wrong)) continue;
        if (static_cast<int>(correct.size()) < n_correct) {
            if (auto i = pick_of_kind(valid, kind, rng)) {
                correct.push_back(take(valid, *i));
                continue;
            }
        }
        if (static_cast<int>(wrong.size()) < n_wrong) {
            if (auto i = pick_of_kind(distractors, kind, rng)) {
                wrong.push_back(take(distractors, *i));
                continue;
            }
        }
        infeasible(cfg, "cannot place required pattern '" + std::string(pattern_kind_name(kind)) + "'");
    }
    while (static_cast<int>(correct.size()) < n_correct) {
        correct.push_back(take(valid, pick_weighted(valid, cfg.weights, rng)));
    }
    while (static_cast<int>(wrong.size()) < n_wrong) {
        wrong.push_back(take(distractors, rng.below(distractors.size())));
    }

    struct Slot {
        Pattern pattern;
        bool correct;
    };
    std::vector<Slot> slots;
    for (const Pattern& p : correct) slots.push_back({p, true});
    for (const Pattern& p : wrong) slots.push_back({p, false});
    rng.shuffle(slots);

    CombinatorialQuestion cq;
    cq.id = q.id + "-C";
    cq.source_id = q.id;
    cq.context = q.context;
    cq.statements = atoms.statements;
    cq.tier = cfg.tier;
    cq.seed = seed;
    cq.source_answer = q.answer;
    cq.source_answer_text = trim(q.options[static_cast<std::size_t>(index_of(q.answer))]);
    cq.language = q.language;
    cq.source = q.source;
    cq.reasoning_type = q.reasoning_type;
    cq.features = q.features;
    for (std::size_t k = 0; k < slots.size(); ++k) {
        const char letter = static_cast<char>('A' + k);
        const Formula f = slots[k].pattern.expand();
        cq.options.push_back({letter, f, render(f, q.language), slots[k].pattern.kind});
        if (slots[k].correct) cq.answer_set.push_back(letter);
    }
    return cq;
}

VerificationReport verify(const CombinatorialQuestion& cq) {
    VerificationReport report;
    const auto flag = [&](char letter, std::string rule, std::string message) {
        report.violations.push_back({letter, std::move(rule), std::move(message)});
    };

    const unsigned truth_row = Assignment::ground_truth(cq.source_answer).row();
    const std::set<char> answers(cq.answer_set.begin(), cq.answer_set.end());
    std::vector<Formula> seen;
    for (std::size_t k = 0; k < cq.options.size(); ++k) {
        const auto& opt = cq.options[k];
        if (opt.letter != static_cast<char>('A' + k)) {
            flag(opt.letter, "letter-order", "option letters must run A, B, C, ... in order");
        }
        const bool value = truth_table(opt.formula)[truth_row].value;
        const bool labeled = answers.count(opt.letter) > 0;
        if (value != labeled) {
            flag(opt.letter, "truth-mismatch",
                 std::string("formula ") + opt.formula.serialize() + " is " + (value ? "true" : "false") +
                     " under the ground truth but labeled " + (labeled ? "correct" : "incorrect"));
        }
        const Formula canon = opt.formula.canonical();
        if (std::any_of(seen.begin(), seen.end(), [&](const Formula& f) { return f == canon; })) {
            flag(opt.letter, "duplicate-formula", "formula repeats an earlier option");
        }
        seen.push_back(canon);
        if (!cq.source_answer_text.empty() && trim(opt.text) == cq.source_answer_text) {
            flag(opt.letter, "source-leak", "option text reproduces the atomic answer verbatim");
        }
        const auto recognized = classify(opt.formula);
        if (!recognized || recognized->kind != opt.kind) {
            flag(opt.letter, "kind-mismatch", "recorded pattern kind does not match the formula");
        }
    }
    for (char letter : answers) {
        if (letter < 'A' || letter >= static_cast<char>('A' + cq.options.size())) {
            flag(letter, "unknown-letter", "answer letter has no option");
        }
    }
    if (answers.empty() || answers.size() >= cq.options.size()) {
        flag('-', "degenerate-answer-set",
             "answer set size " + std::to_string(answers.size()) + " must be in [1, " +
                 std::to_string(cq.options.size()) + ")");
    }
    for (PatternKind kind : TierConfig::defaults(cq.tier).required) {
        const bool present = std::any_of(cq.options.begin(), cq.options.end(), [&](const CombinatorialOption& o) {
            const auto p = classify(o.formula);
            return p && p->kind == kind;
        });
        if (!present) {
            flag('-', "missing-required-pattern",
                 std::string(tier_name(cq.tier)) + " requires a " + std::string(pattern_kind_name(kind)) + " option");
        }
    }
    report.valid = report.violations.empty();
    return report;
}

SynthesisResult synthesize(const AtomicQuestion& q, const TierConfig& cfg, std::uint64_t seed, int max_attempts) {
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        CombinatorialQuestion cq = assemble(q, cfg, seed + static_cast<std::uint64_t>(attempt));
        if (verify(cq).valid) return {std::move(cq), attempt + 1};
    }
    throw ConfigError("question '" + q.id + "' failed verification after " + std::to_string(max_attempts) +
                      " attempts");
}

// ---------------------------------------------------------------------------
// Baseline transforms

AtomicQuestion apply_nota(const AtomicQuestion& q) {
    check_four_options(q);
    AtomicQuestion out = q;
    out.options[static_cast<std::size_t>(index_of(q.answer))] = std::string(kNotaText);
    return out;
}

AtomicQuestion shuffle_options(const AtomicQuestion& q, std::uint64_t seed) {
    check_four_options(q);
    std::vector<int> perm{0, 1, 2, 3};
    Rng rng(seed);
    rng.shuffle(perm);
    AtomicQuestion out = q;
    for (int k = 0; k < 4; ++k) {
        out.options[static_cast<std::size_t>(k)] = q.options[static_cast<std::size_t>(perm[k])];
        if (perm[k] == index_of(q.answer)) out.answer = var_from_index(k);
    }
    return out;
}

}  // namespace logihard
