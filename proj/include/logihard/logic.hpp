#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace logihard {

// The four atomized option variables. Ordering I < II < III < IV is the
// enumeration order everywhere (truth tables, canonical forms, pools).
enum class PropVar : std::uint8_t { I = 0, II = 1, III = 2, IV = 3 };

inline constexpr std::array<PropVar, 4> kAllVars{PropVar::I, PropVar::II, PropVar::III,
                                                 PropVar::IV};

constexpr int index_of(PropVar v) { return static_cast<int>(v); }
PropVar var_from_index(int index);

std::string_view roman(PropVar v);
std::optional<PropVar> parse_roman(std::string_view text);

// Truth valuation over all four variables.
class Assignment {
public:
    constexpr Assignment() = default;
    constexpr explicit Assignment(std::array<bool, 4> truth) : truth_(truth) {}

    // The ground-truth assignment induced by the atomic answer: only `answer` is true.
    static Assignment ground_truth(PropVar answer);
    // Row `row` of the lexicographic truth table; bit 3 is I, bit 0 is IV.
    static Assignment from_row(unsigned row);

    constexpr bool operator[](PropVar v) const { return truth_[static_cast<std::size_t>(v)]; }
    unsigned row() const;
    int true_count() const;

    bool operator==(const Assignment&) const = default;

private:
    std::array<bool, 4> truth_{};
};

// Immutable propositional formula. Copies share structure.
class Formula {
public:
    enum class Op : std::uint8_t { Var, Not, And, Or };

    static Formula var(PropVar v);
    static Formula negation(Formula operand);
    static Formula conjunction(Formula lhs, Formula rhs);
    static Formula disjunction(Formula lhs, Formula rhs);
    // Left-nested conjunction / disjunction over a non-empty list.
    static Formula all_of(const std::vector<Formula>& terms);
    static Formula any_of(const std::vector<Formula>& terms);

    Op op() const;
    PropVar variable() const;          // Op::Var only
    const Formula& operand() const;    // Op::Not only
    const Formula& lhs() const;        // Op::And / Op::Or
    const Formula& rhs() const;

    int depth() const;

    // Flattens associative chains, sorts commutative operands, and rebuilds
    // left-nested. Two formulas equal up to commutativity and associativity
    // of the same connective share a canonical form.
    Formula canonical() const;

    // Structural equality (no normalization).
    bool operator==(const Formula& other) const;
    // Total structural order: Var < Not < And < Or, then by children.
    static int compare(const Formula& a, const Formula& b);

    // Prefix text form, e.g. AND(VAR(I),NOT(VAR(II))).
    std::string serialize() const;
    // Inverse of serialize(); throws std::invalid_argument on malformed input.
    static Formula parse(std::string_view text);

private:
    struct Node;
    explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

bool evaluate(const Formula& formula, const Assignment& assignment);

struct TruthRow {
    Assignment assignment;
    bool value;
};

// All 16 assignments in lexicographic order of (I, II, III, IV) with false < true.
std::array<TruthRow, 16> truth_table(const Formula& formula);

// ---------------------------------------------------------------------------
// Patterns

enum class PatternKind : std::uint8_t { Exactness, Disjunction, Negation, CompoundNegation, Universal };

std::string_view pattern_kind_name(PatternKind kind);
std::optional<PatternKind> parse_pattern_kind(std::string_view name);

// A named formula family. `first`/`second` are used according to kind;
// two-variable kinds store first < second. Universal is the all-negated
// distractor and carries no variables.
struct Pattern {
    PatternKind kind;
    PropVar first = PropVar::I;
    PropVar second = PropVar::I;

    static Pattern exactness(PropVar v) { return {PatternKind::Exactness, v, v}; }
    static Pattern disjunction(PropVar a, PropVar b);
    static Pattern negation(PropVar v) { return {PatternKind::Negation, v, v}; }
    static Pattern compound_negation(PropVar a, PropVar b);
    static Pattern universal() { return {PatternKind::Universal}; }

    // Canonical formula for the pattern.
    Formula expand() const;

    bool operator==(const Pattern&) const = default;
};

// Every pattern over the four variables (4 + 6 + 4 + 6 + 1).
std::vector<Pattern> all_patterns();

// Recognizes canonical pattern expansions up to commutativity/associativity.
std::optional<Pattern> classify(const Formula& formula);

// ---------------------------------------------------------------------------
// Rendering

enum class Locale : std::uint8_t { En, Zh };

std::string_view locale_name(Locale locale);
std::optional<Locale> parse_locale(std::string_view name);

// Option-text templates. `{i}` and `{j}` are replaced by roman numerals.
struct RenderTemplates {
    std::string exactness;
    std::string disjunction;
    std::string negation;
    std::string compound_negation;
    std::string universal;

    static const RenderTemplates& defaults(Locale locale);
};

std::string render(const Formula& formula, Locale locale);
std::string render(const Formula& formula, const RenderTemplates& templates);

// Infix notation with ∧ ∨ ¬ and roman variable names, e.g. "(I ∧ II)".
std::string render_symbolic(const Formula& formula);

}  // namespace logihard
