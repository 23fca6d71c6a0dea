#pragma once

#include "logihard/common.hpp"
#include "logihard/logic.hpp"
#include "logihard/synthesis.hpp"

namespace logihard::testing {

inline Formula random_formula(Rng& rng, int depth) {
    if (depth == 0 || rng.below(4) == 0) return Formula::var(var_from_index(static_cast<int>(rng.below(4))));
    switch (rng.below(3)) {
        case 0: return Formula::negation(random_formula(rng, depth - 1));
        case 1: return Formula::conjunction(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
        default: return Formula::disjunction(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    }
}

inline std::array<bool, 16> table_bits(const Formula& f) {
    std::array<bool, 16> out{};
    const auto rows = truth_table(f);
    for (std::size_t k = 0; k < 16; ++k) out[k] = rows[k].value;
    return out;
}

inline AtomicQuestion sample_question(PropVar answer, std::string id = "q1") {
    AtomicQuestion q;
    q.id = std::move(id);
    q.context = "Four boxes are labelled. Exactly one label is accurate. Which one?";
    q.options = {"The red box holds the key", "The blue box holds the key", "The green box holds the key",
                 "The white box holds the key"};
    q.answer = answer;
    q.source = "unit";
    q.reasoning_type = "deduction";
    return q;
}

}  // namespace logihard::testing
