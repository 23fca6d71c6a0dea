#include "logihard/logic.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <stdexcept>

namespace logihard {

PropVar var_from_index(int index) {
    if (index < 0 || index > 3) {
        throw std::out_of_range("propositional variable index out of range: " + std::to_string(index));
    }
    return static_cast<PropVar>(index);
}

std::string_view roman(PropVar v) {
    static constexpr std::array<std::string_view, 4> names{"I", "II", "III", "IV"};
    return names[static_cast<std::size_t>(v)];
}

std::optional<PropVar> parse_roman(std::string_view text) {
    for (PropVar v : kAllVars) {
        if (text == roman(v)) return v;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Assignment

Assignment Assignment::ground_truth(PropVar answer) {
    std::array<bool, 4> truth{};
    truth[static_cast<std::size_t>(answer)] = true;
    return Assignment(truth);
}

Assignment Assignment::from_row(unsigned row) {
    if (row > 15) throw std::out_of_range("truth table row out of range");
    std::array<bool, 4> truth{};
    for (int i = 0; i < 4; ++i) truth[i] = (row >> (3 - i)) & 1U;
    return Assignment(truth);
}

unsigned Assignment::row() const {
    unsigned r = 0;
    for (int i = 0; i < 4; ++i) r = (r << 1) | (truth_[i] ? 1U : 0U);
    return r;
}

int Assignment::true_count() const {
    return static_cast<int>(std::count(truth_.begin(), truth_.end(), true));
}

// ---------------------------------------------------------------------------
// Formula

struct Formula::Node {
    Op op;
    PropVar var = PropVar::I;
    std::optional<Formula> left;
    std::optional<Formula> right;
};

Formula Formula::var(PropVar v) {
    return Formula(std::make_shared<const Node>(Node{Op::Var, v, std::nullopt, std::nullopt}));
}

Formula Formula::negation(Formula operand) {
    return Formula(std::make_shared<const Node>(Node{Op::Not, PropVar::I, std::move(operand), std::nullopt}));
}

Formula Formula::conjunction(Formula lhs, Formula rhs) {
    return Formula(std::make_shared<const Node>(Node{Op::And, PropVar::I, std::move(lhs), std::move(rhs)}));
}

Formula Formula::disjunction(Formula lhs, Formula rhs) {
    return Formula(std::make_shared<const Node>(Node{Op::Or, PropVar::I, std::move(lhs), std::move(rhs)}));
}

namespace {

Formula fold(const std::vector<Formula>& terms, Formula::Op op) {
    if (terms.empty()) throw std::invalid_argument("cannot fold an empty formula list");
    Formula acc = terms.front();
    for (std::size_t i = 1; i < terms.size(); ++i) {
        acc = op == Formula::Op::And ? Formula::conjunction(acc, terms[i])
                                     : Formula::disjunction(acc, terms[i]);
    }
    return acc;
}

}  // namespace

Formula Formula::all_of(const std::vector<Formula>& terms) { return fold(terms, Op::And); }
Formula Formula::any_of(const std::vector<Formula>& terms) { return fold(terms, Op::Or); }

Formula::Op Formula::op() const { return node_->op; }

PropVar Formula::variable() const {
    if (node_->op != Op::Var) throw std::logic_error("variable() on a non-variable node");
    return node_->var;
}

const Formula& Formula::operand() const {
    if (node_->op != Op::Not) throw std::logic_error("operand() on a non-negation node");
    return *node_->left;
}

const Formula& Formula::lhs() const {
    if (node_->op != Op::And && node_->op != Op::Or) throw std::logic_error("lhs() on a non-binary node");
    return *node_->left;
}

const Formula& Formula::rhs() const {
    if (node_->op != Op::And && node_->op != Op::Or) throw std::logic_error("rhs() on a non-binary node");
    return *node_->right;
}

int Formula::depth() const {
    switch (node_->op) {
        case Op::Var: return 1;
        case Op::Not: return 1 + operand().depth();
        default: return 1 + std::max(lhs().depth(), rhs().depth());
    }
}

int Formula::compare(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return 0;
    if (a.op() != b.op()) return a.op() < b.op() ? -1 : 1;
    switch (a.op()) {
        case Op::Var:
            return index_of(a.variable()) - index_of(b.variable());
        case Op::Not:
            return compare(a.operand(), b.operand());
        default: {
            const int c = compare(a.lhs(), b.lhs());
            return c != 0 ? c : compare(a.rhs(), b.rhs());
        }
    }
}

bool Formula::operator==(const Formula& other) const { return compare(*this, other) == 0; }

namespace {

void collect_chain(const Formula& f, Formula::Op op, std::vector<Formula>& out) {
    if (f.op() == op) {
        collect_chain(f.lhs(), op, out);
        collect_chain(f.rhs(), op, out);
    } else {
        out.push_back(f.canonical());
    }
}

}  // namespace

Formula Formula::canonical() const {
    switch (op()) {
        case Op::Var: return *this;
        case Op::Not: return negation(operand().canonical());
        default: {
            std::vector<Formula> terms;
            collect_chain(*this, op(), terms);
            std::sort(terms.begin(), terms.end(),
                      [](const Formula& x, const Formula& y) { return compare(x, y) < 0; });
            return fold(terms, op());
        }
    }
}

std::string Formula::serialize() const {
    switch (op()) {
        case Op::Var: return "VAR(" + std::string(roman(variable())) + ")";
        case Op::Not: return "NOT(" + operand().serialize() + ")";
        case Op::And: return "AND(" + lhs().serialize() + "," + rhs().serialize() + ")";
        case Op::Or: return "OR(" + lhs().serialize() + "," + rhs().serialize() + ")";
    }
    return {};
}

namespace {

class PrefixParser {
public:
    explicit PrefixParser(std::string_view text) : text_(text) {}

    Formula parse_all() {
        Formula f = parse_node();
        skip_space();
        if (pos_ != text_.size()) fail("trailing characters");
        return f;
    }

private:
    Formula parse_node() {
        skip_space();
        const std::string_view head = read_word();
        expect('(');
        if (head == "VAR") {
            skip_space();
            const std::string_view name = read_word();
            const auto v = parse_roman(name);
            if (!v) fail("unknown variable '" + std::string(name) + "'");
            expect(')');
            return Formula::var(*v);
        }
        if (head == "NOT") {
            Formula inner = parse_node();
            expect(')');
            return Formula::negation(std::move(inner));
        }
        if (head == "AND" || head == "OR") {
            Formula l = parse_node();
            expect(',');
            Formula r = parse_node();
            expect(')');
            return head == "AND" ? Formula::conjunction(std::move(l), std::move(r))
                                 : Formula::disjunction(std::move(l), std::move(r));
        }
        fail("unknown connective '" + std::string(head) + "'");
    }

    std::string_view read_word() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isupper(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) fail("expected identifier");
        return text_.substr(start, pos_ - start);
    }

    void expect(char c) {
        skip_space();
        if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw std::invalid_argument("formula parse error at offset " + std::to_string(pos_) + ": " + what);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

Formula Formula::parse(std::string_view text) { return PrefixParser(text).parse_all(); }

bool evaluate(const Formula& formula, const Assignment& assignment) {
    switch (formula.op()) {
        case Formula::Op::Var: return assignment[formula.variable()];
        case Formula::Op::Not: return !evaluate(formula.operand(), assignment);
        case Formula::Op::And:
            return evaluate(formula.lhs(), assignment) && evaluate(formula.rhs(), assignment);
        case Formula::Op::Or:
            return evaluate(formula.lhs(), assignment) || evaluate(formula.rhs(), assignment);
    }
    return false;
}

std::array<TruthRow, 16> truth_table(const Formula& formula) {
    std::array<TruthRow, 16> rows{};
    for (unsigned r = 0; r < 16; ++r) {
        const Assignment a = Assignment::from_row(r);
        rows[r] = TruthRow{a, evaluate(formula, a)};
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Patterns

std::string_view pattern_kind_name(PatternKind kind) {
    switch (kind) {
        case PatternKind::Exactness: return "exactness";
        case PatternKind::Disjunction: return "disjunction";
        case PatternKind::Negation: return "negation";
        case PatternKind::CompoundNegation: return "compound_negation";
        case PatternKind::Universal: return "universal";
    }
    return "unknown";
}

std::optional<PatternKind> parse_pattern_kind(std::string_view name) {
    for (PatternKind k : {PatternKind::Exactness, PatternKind::Disjunction, PatternKind::Negation,
                          PatternKind::CompoundNegation, PatternKind::Universal}) {
        if (name == pattern_kind_name(k)) return k;
    }
    return std::nullopt;
}

namespace {

std::pair<PropVar, PropVar> ordered_pair(PropVar a, PropVar b) {
    if (a == b) throw std::invalid_argument("two-variable pattern requires distinct variables");
    return index_of(a) < index_of(b) ? std::pair{a, b} : std::pair{b, a};
}

}  // namespace

Pattern Pattern::disjunction(PropVar a, PropVar b) {
    const auto [lo, hi] = ordered_pair(a, b);
    return {PatternKind::Disjunction, lo, hi};
}

Pattern Pattern::compound_negation(PropVar a, PropVar b) {
    const auto [lo, hi] = ordered_pair(a, b);
    return {PatternKind::CompoundNegation, lo, hi};
}

Formula Pattern::expand() const {
    const auto not_var = [](PropVar v) { return Formula::negation(Formula::var(v)); };
    switch (kind) {
        case PatternKind::Exactness: {
            std::vector<Formula> terms{Formula::var(first)};
            for (PropVar v : kAllVars) {
                if (v != first) terms.push_back(not_var(v));
            }
            return Formula::all_of(terms).canonical();
        }
        case PatternKind::Disjunction:
            return Formula::disjunction(Formula::var(first), Formula::var(second)).canonical();
        case PatternKind::Negation:
            return not_var(first);
        case PatternKind::CompoundNegation:
            return Formula::conjunction(not_var(first), not_var(second)).canonical();
        case PatternKind::Universal: {
            std::vector<Formula> terms;
            for (PropVar v : kAllVars) terms.push_back(not_var(v));
            return Formula::all_of(terms).canonical();
        }
    }
    throw std::logic_error("unhandled pattern kind");
}

std::vector<Pattern> all_patterns() {
    std::vector<Pattern> out;
    for (PropVar v : kAllVars) out.push_back(Pattern::exactness(v));
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) out.push_back(Pattern::disjunction(var_from_index(i), var_from_index(j)));
    for (PropVar v : kAllVars) out.push_back(Pattern::negation(v));
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            out.push_back(Pattern::compound_negation(var_from_index(i), var_from_index(j)));
    out.push_back(Pattern::universal());
    return out;
}

std::optional<Pattern> classify(const Formula& formula) {
    static const std::vector<std::pair<Formula, Pattern>> table = [] {
        std::vector<std::pair<Formula, Pattern>> t;
        for (const Pattern& p : all_patterns()) t.emplace_back(p.expand(), p);
        return t;
    }();
    const Formula canon = formula.canonical();
    for (const auto& [f, p] : table) {
        if (f == canon) return p;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Rendering

std::string_view locale_name(Locale locale) { return locale == Locale::En ? "en" : "zh"; }

std::optional<Locale> parse_locale(std::string_view name) {
    if (name == "en") return Locale::En;
    if (name == "zh") return Locale::Zh;
    return std::nullopt;
}

const RenderTemplates& RenderTemplates::defaults(Locale locale) {
    static const RenderTemplates en{
        "Only statement {i} is correct",
        "Statement {i} or statement {j} is correct",
        "Statement {i} is not correct",
        "Neither statement {i} nor statement {j} is correct",
        "None of statements I, II, III, IV is correct",
    };
    static const RenderTemplates zh{
        "只有陈述{i}正确",
        "陈述{i}或陈述{j}正确",
        "陈述{i}不正确",
        "陈述{i}和陈述{j}都不正确",
        "陈述I、II、III、IV都不正确",
    };
    return locale == Locale::En ? en : zh;
}

namespace {

std::string fill(std::string text, std::string_view key, std::string_view value) {
    for (std::size_t pos = text.find(key); pos != std::string::npos; pos = text.find(key, pos + value.size())) {
        text.replace(pos, key.size(), value);
    }
    return text;
}

std::string apply(const std::string& tmpl, PropVar i, PropVar j) {
    return fill(fill(tmpl, "{i}", roman(i)), "{j}", roman(j));
}

void symbolic_into(const Formula& f, std::string& out) {
    switch (f.op()) {
        case Formula::Op::Var:
            out += roman(f.variable());
            return;
        case Formula::Op::Not:
            out += "¬";
            symbolic_into(f.operand(), out);
            return;
        default: {
            std::vector<Formula> terms;
            const auto op = f.op();
            // In-order flatten of the same-connective chain.
            std::function<void(const Formula&)> walk = [&](const Formula& g) {
                if (g.op() == op) {
                    walk(g.lhs());
                    walk(g.rhs());
                } else {
                    terms.push_back(g);
                }
            };
            walk(f);
            out += "(";
            for (std::size_t k = 0; k < terms.size(); ++k) {
                if (k > 0) out += op == Formula::Op::And ? " ∧ " : " ∨ ";
                symbolic_into(terms[k], out);
            }
            out += ")";
            return;
        }
    }
}

}  // namespace

std::string render_symbolic(const Formula& formula) {
    std::string out;
    symbolic_into(formula, out);
    return out;
}

std::string render(const Formula& formula, const RenderTemplates& templates) {
    const auto pattern = classify(formula);
    if (!pattern) return render_symbolic(formula);
    switch (pattern->kind) {
        case PatternKind::Exactness: return apply(templates.exactness, pattern->first, pattern->first);
        case PatternKind::Disjunction: return apply(templates.disjunction, pattern->first, pattern->second);
        case PatternKind::Negation: return apply(templates.negation, pattern->first, pattern->first);
        case PatternKind::CompoundNegation:
            return apply(templates.compound_negation, pattern->first, pattern->second);
        case PatternKind::Universal: return templates.universal;
    }
    return render_symbolic(formula);
}

std::string render(const Formula& formula, Locale locale) {
    return render(formula, RenderTemplates::defaults(locale));
}

}  // namespace logihard
