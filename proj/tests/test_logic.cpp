#include <gtest/gtest.h>

#include <set>

#include "logihard/logic.hpp"
#include "support.hpp"

using namespace logihard;
using logihard::testing::random_formula;
using logihard::testing::table_bits;

namespace {

// Pattern semantics written out directly over the four truth values.
bool oracle(const Pattern& p, const Assignment& t) {
    const int i = index_of(p.first), j = index_of(p.second);
    std::array<bool, 4> v{t[PropVar::I], t[PropVar::II], t[PropVar::III], t[PropVar::IV]};
    switch (p.kind) {
        case PatternKind::Exactness: {
            bool others = false;
            for (int k = 0; k < 4; ++k) others = others || (k != i && v[k]);
            return v[i] && !others;
        }
        case PatternKind::Disjunction: return v[i] || v[j];
        case PatternKind::Negation: return !v[i];
        case PatternKind::CompoundNegation: return !v[i] && !v[j];
        case PatternKind::Universal: return !v[0] && !v[1] && !v[2] && !v[3];
    }
    return false;
}

}  // namespace

TEST(Assignment, GroundTruthHasOnlyTheAnswerTrue) {
    for (PropVar a : kAllVars) {
        const Assignment t = Assignment::ground_truth(a);
        EXPECT_EQ(t.true_count(), 1);
        for (PropVar v : kAllVars) EXPECT_EQ(t[v], v == a);
    }
}

TEST(Assignment, RowBitThreeIsFirstVariable) {
    EXPECT_TRUE(Assignment::from_row(8)[PropVar::I]);
    EXPECT_EQ(Assignment::from_row(8).true_count(), 1);
    EXPECT_TRUE(Assignment::from_row(1)[PropVar::IV]);
    for (unsigned r = 0; r < 16; ++r) EXPECT_EQ(Assignment::from_row(r).row(), r);
    EXPECT_EQ(Assignment::ground_truth(PropVar::II).row(), 4u);
}

TEST(Roman, ParseAndPrint) {
    for (PropVar v : kAllVars) EXPECT_EQ(parse_roman(roman(v)), v);
    EXPECT_FALSE(parse_roman("V").has_value());
    EXPECT_FALSE(parse_roman("").has_value());
}

TEST(Patterns, TwentyOneDistinct) {
    const auto all = all_patterns();
    ASSERT_EQ(all.size(), 21u);
    std::set<std::string> forms;
    for (const auto& p : all) forms.insert(p.expand().serialize());
    EXPECT_EQ(forms.size(), 21u);
}

TEST(Patterns, ExpansionsMatchOracleOnEveryAssignment) {
    for (const auto& p : all_patterns()) {
        const auto rows = truth_table(p.expand());
        for (unsigned r = 0; r < 16; ++r) {
            EXPECT_EQ(rows[r].value, oracle(p, Assignment::from_row(r))) << p.expand().serialize() << " row " << r;
            EXPECT_EQ(rows[r].assignment.row(), r);
        }
    }
}

TEST(Patterns, UniversalIsFalseUnderEveryGroundTruth) {
    for (PropVar a : kAllVars) EXPECT_FALSE(evaluate(Pattern::universal().expand(), Assignment::ground_truth(a)));
}

TEST(Patterns, ClassifyInvertsExpand) {
    for (const auto& p : all_patterns()) {
        const auto c = classify(p.expand());
        ASSERT_TRUE(c.has_value());
        EXPECT_EQ(*c, p);
    }
}

TEST(Patterns, ClassifyIgnoresOperandOrder) {
    const Formula i = Formula::var(PropVar::I), iii = Formula::var(PropVar::III);
    const auto c = classify(Formula::disjunction(iii, i));
    ASSERT_TRUE(c.has_value());
    EXPECT_EQ(*c, Pattern::disjunction(PropVar::I, PropVar::III));
    const auto n = classify(Formula::conjunction(Formula::negation(iii), Formula::negation(i)));
    ASSERT_TRUE(n.has_value());
    EXPECT_EQ(n->kind, PatternKind::CompoundNegation);
}

TEST(Patterns, ClassifyRejectsOtherShapes) {
    const Formula i = Formula::var(PropVar::I), ii = Formula::var(PropVar::II);
    EXPECT_FALSE(classify(Formula::conjunction(i, ii)).has_value());
    EXPECT_FALSE(classify(Formula::negation(Formula::negation(i))).has_value());
    EXPECT_FALSE(classify(i).has_value());
}

TEST(Patterns, TwoVariableFactoriesOrderOperands) {
    EXPECT_EQ(Pattern::disjunction(PropVar::IV, PropVar::II), Pattern::disjunction(PropVar::II, PropVar::IV));
    EXPECT_THROW(Pattern::disjunction(PropVar::II, PropVar::II), std::invalid_argument);
    EXPECT_THROW(Pattern::compound_negation(PropVar::I, PropVar::I), std::invalid_argument);
}

TEST(Formula, DeMorganOnRandomFormulas) {
    Rng rng(11);
    for (int k = 0; k < 1000; ++k) {
        const Formula f = random_formula(rng, 3), g = random_formula(rng, 3);
        EXPECT_EQ(table_bits(Formula::negation(Formula::conjunction(f, g))),
                  table_bits(Formula::disjunction(Formula::negation(f), Formula::negation(g))));
        EXPECT_EQ(table_bits(Formula::negation(Formula::disjunction(f, g))),
                  table_bits(Formula::conjunction(Formula::negation(f), Formula::negation(g))));
    }
}

TEST(Formula, CanonicalPreservesMeaningAndIsIdempotent) {
    Rng rng(12);
    for (int k = 0; k < 1000; ++k) {
        const Formula f = random_formula(rng, 4);
        const Formula c = f.canonical();
        EXPECT_EQ(table_bits(f), table_bits(c));
        EXPECT_EQ(c.canonical(), c);
    }
}

TEST(Formula, CanonicalIdentifiesCommutedAndReassociated) {
    const Formula a = Formula::var(PropVar::I), b = Formula::var(PropVar::II), c = Formula::var(PropVar::III);
    const Formula left = Formula::conjunction(Formula::conjunction(a, b), c);
    const Formula right = Formula::conjunction(c, Formula::conjunction(b, a));
    EXPECT_FALSE(left == right);
    EXPECT_EQ(left.canonical(), right.canonical());
    // Different connectives never merge.
    EXPECT_FALSE(Formula::conjunction(a, b).canonical() == Formula::disjunction(a, b).canonical());
}

TEST(Formula, SerializeRoundTrip) {
    Rng rng(13);
    for (int k = 0; k < 500; ++k) {
        const Formula f = random_formula(rng, 4);
        const std::string s = f.serialize();
        EXPECT_EQ(Formula::parse(s), f) << s;
        EXPECT_EQ(Formula::parse(s).serialize(), s);
    }
    EXPECT_EQ(Formula::conjunction(Formula::var(PropVar::I), Formula::negation(Formula::var(PropVar::II))).serialize(),
              "AND(VAR(I),NOT(VAR(II)))");
}

TEST(Formula, ParseRejectsMalformed) {
    EXPECT_EQ(Formula::parse(" NOT( VAR(I) ) "), Formula::negation(Formula::var(PropVar::I)));
    for (const char* bad : {"", "VAR(V)", "AND(VAR(I))", "NOT(VAR(I)", "OR(VAR(I),VAR(II),VAR(III))",
                            "XOR(VAR(I),VAR(II))", "VAR(I)VAR(II)"}) {
        EXPECT_THROW(Formula::parse(bad), std::invalid_argument) << bad;
    }
}

TEST(Formula, Accessors) {
    const Formula f = Formula::negation(Formula::disjunction(Formula::var(PropVar::I), Formula::var(PropVar::IV)));
    EXPECT_EQ(f.op(), Formula::Op::Not);
    EXPECT_EQ(f.operand().op(), Formula::Op::Or);
    EXPECT_EQ(f.operand().rhs().variable(), PropVar::IV);
    EXPECT_EQ(f.depth(), 3);
    EXPECT_THROW(Formula::all_of({}), std::invalid_argument);
}

TEST(Render, EnglishTemplates) {
    EXPECT_EQ(render(Pattern::exactness(PropVar::II).expand(), Locale::En), "Only statement II is correct");
    EXPECT_EQ(render(Pattern::disjunction(PropVar::I, PropVar::III).expand(), Locale::En),
              "Statement I or statement III is correct");
    EXPECT_EQ(render(Pattern::negation(PropVar::IV).expand(), Locale::En), "Statement IV is not correct");
    EXPECT_EQ(render(Pattern::compound_negation(PropVar::I, PropVar::II).expand(), Locale::En),
              "Neither statement I nor statement II is correct");
    EXPECT_EQ(render(Pattern::universal().expand(), Locale::En), "None of statements I, II, III, IV is correct");
}

TEST(Render, InjectiveOverPatternsInBothLocales) {
    for (Locale l : {Locale::En, Locale::Zh}) {
        std::set<std::string> texts;
        for (const auto& p : all_patterns()) texts.insert(render(p.expand(), l));
        EXPECT_EQ(texts.size(), 21u) << locale_name(l);
    }
}

TEST(Render, SymbolicFallbackForNonPatterns) {
    const Formula f = Formula::conjunction(Formula::var(PropVar::I), Formula::var(PropVar::II));
    EXPECT_EQ(render(f, Locale::En), render_symbolic(f));
    EXPECT_EQ(render_symbolic(f), "(I ∧ II)");
    EXPECT_EQ(render_symbolic(Formula::negation(Formula::var(PropVar::III))), "¬III");
}

TEST(Render, CustomTemplates) {
    RenderTemplates t = RenderTemplates::defaults(Locale::En);
    t.negation = "not {i}";
    EXPECT_EQ(render(Pattern::negation(PropVar::II).expand(), t), "not II");
}
