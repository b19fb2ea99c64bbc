#include "mwpdiv/consistency.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "mwpdiv/normalize.hpp"
#include "mwpdiv/parallel.hpp"

namespace mwpdiv {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_letter(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

// ---------------------------------------------------------------------------
// Infix equation parsing
// ---------------------------------------------------------------------------

class EquationParser {
public:
    explicit EquationParser(std::string_view text) : text_(text) {}

    EquationSystem parse() {
        EquationSystem system;
        for (;;) {
            skip_ws();
            if (pos_ >= text_.size()) break;
            if (peek() == ';') {  // empty segment
                ++pos_;
                continue;
            }
            system.equations.push_back(parse_equation_part());
            skip_ws();
            if (pos_ < text_.size()) {
                if (peek() != ';') fail_at_current("after expression");
                ++pos_;
            }
        }
        if (system.equations.empty()) throw ParseError("empty equation", 0);
        system.variables = vars_;

        if (system.equations.size() == 1) {
            if (vars_.size() > 1)
                throw UnsupportedError("one equation with two unknowns is underdetermined");
        } else if (system.equations.size() == 2) {
            if (vars_ != std::set<char>{'x', 'y'})
                throw UnsupportedError("two equations must use exactly the variables x and y");
        } else {
            throw UnsupportedError("more than two equations");
        }
        return system;
    }

private:
    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    [[noreturn]] void fail_at_current(const std::string& context) {
        if (is_letter(peek())) {
            std::size_t end = pos_;
            while (end < text_.size() && is_letter(text_[end])) ++end;
            throw ParseError("unexpected word \"" + std::string(text_.substr(pos_, end - pos_)) +
                                 "\" " + context + " (units are not allowed in equations)",
                             pos_);
        }
        throw ParseError(
            "unexpected character '" + std::string(1, peek()) + "' " + context, pos_);
    }

    Equation parse_equation_part() {
        Equation eq;
        eq.left = parse_expr();
        skip_ws();
        if (peek() == '=') {
            ++pos_;
            eq.right = parse_expr();
        }
        return eq;
    }

    std::unique_ptr<Expr> parse_expr() {
        auto node = parse_term();
        for (;;) {
            skip_ws();
            char c = peek();
            if (c != '+' && c != '-') return node;
            ++pos_;
            auto rhs = parse_term();
            node = make_binary(c, std::move(node), std::move(rhs));
        }
    }

    std::unique_ptr<Expr> parse_term() {
        auto node = parse_factor();
        for (;;) {
            skip_ws();
            char c = peek();
            if (c != '*' && c != '/') return node;
            ++pos_;
            auto rhs = parse_factor();
            node = make_binary(c, std::move(node), std::move(rhs));
        }
    }

    std::unique_ptr<Expr> parse_factor() {
        skip_ws();
        const std::size_t at = pos_;
        char c = peek();
        if (c == '(') {
            ++pos_;
            auto node = parse_expr();
            skip_ws();
            if (peek() != ')') throw ParseError("missing ')'", pos_);
            ++pos_;
            return node;
        }
        if (c == '-' || c == '+') {
            ++pos_;
            auto inner = parse_factor();
            if (c == '+') return inner;
            auto zero = std::make_unique<Expr>();
            zero->kind = Expr::Kind::Number;
            zero->value = 0;
            return make_binary('-', std::move(zero), std::move(inner));
        }
        if (is_digit(c)) {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (is_digit(text_[pos_]) || text_[pos_] == ',' || text_[pos_] == '.'))
                ++pos_;
            auto node = std::make_unique<Expr>();
            node->kind = Expr::Kind::Number;
            try {
                node->value = parse_number(text_.substr(start, pos_ - start));
            } catch (const InputError& e) {
                throw ParseError(e.what(), start);
            }
            return node;
        }
        if (is_letter(c)) {
            if (pos_ + 1 < text_.size() && is_letter(text_[pos_ + 1]))
                throw ParseError("unexpected word (units are not allowed in equations)", at);
            char v = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            ++pos_;
            if (v != 'x' && v != 'y')
                throw UnsupportedError(std::string("unsupported variable '") + v +
                                       "' (only x and y)");
            vars_.insert(v);
            auto node = std::make_unique<Expr>();
            node->kind = Expr::Kind::Variable;
            node->var = v;
            return node;
        }
        if (c == '\0') throw ParseError("unexpected end of input", at);
        throw ParseError("unexpected character '" + std::string(1, c) + "'", at);
    }

    static std::unique_ptr<Expr> make_binary(char op, std::unique_ptr<Expr> l,
                                             std::unique_ptr<Expr> r) {
        auto node = std::make_unique<Expr>();
        node->kind = Expr::Kind::Binary;
        node->op = op;
        node->lhs = std::move(l);
        node->rhs = std::move(r);
        return node;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::set<char> vars_;
};

// value = c + bx*x + by*y
struct Affine {
    Rational c, bx, by;

    bool constant() const { return bx == 0 && by == 0; }
};

Affine affine_eval(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Number:
            return {e.value, 0, 0};
        case Expr::Kind::Variable:
            return e.var == 'x' ? Affine{0, 1, 0} : Affine{0, 0, 1};
        case Expr::Kind::Binary:
            break;
    }
    Affine l = affine_eval(*e.lhs);
    Affine r = affine_eval(*e.rhs);
    switch (e.op) {
        case '+':
            return {l.c + r.c, l.bx + r.bx, l.by + r.by};
        case '-':
            return {l.c - r.c, l.bx - r.bx, l.by - r.by};
        case '*':
            if (!l.constant() && !r.constant())
                throw UnsupportedError("nonlinear equation (variable times variable)");
            if (l.constant()) return {l.c * r.c, l.c * r.bx, l.c * r.by};
            return {r.c * l.c, r.c * l.bx, r.c * l.by};
        case '/':
            if (!r.constant()) throw UnsupportedError("nonlinear equation (variable in divisor)");
            if (r.c == 0) throw EvalError("division by zero");
            return {l.c / r.c, l.bx / r.c, l.by / r.c};
        default:
            throw std::logic_error("bad operator in expression tree");
    }
}

bool is_bare_literal(const Expr& e) { return e.kind == Expr::Kind::Number; }

}  // namespace

EquationSystem parse_equation(std::string_view text) { return EquationParser(text).parse(); }

std::vector<Rational> Solution::values() const {
    if (constant) return {*constant};
    std::vector<Rational> out;
    for (const auto& [_, v] : variables) out.push_back(v);
    return out;
}

Solution solve(const EquationSystem& system) {
    Solution sol;
    if (system.variables.empty()) {
        const Equation& eq = system.equations.front();
        Affine l = affine_eval(*eq.left);
        if (!eq.right) {
            sol.constant = l.c;
            return sol;
        }
        Affine r = affine_eval(*eq.right);
        if (l.c != r.c) {
            // report the compound side's value; "7+2 = 10" reports 9
            const Rational& expr_side =
                is_bare_literal(*eq.left) && !is_bare_literal(*eq.right) ? r.c : l.c;
            throw EquationContradiction(
                "constant equation does not hold (" + format_rational(l.c) +
                    " != " + format_rational(r.c) + ")",
                expr_side);
        }
        sol.constant = l.c;
        return sol;
    }

    if (system.variables.size() == 1) {
        const char v = *system.variables.begin();
        const Equation& eq = system.equations.front();
        if (!eq.right) throw UnsupportedError("expression with a variable but no '='");
        Affine l = affine_eval(*eq.left);
        Affine r = affine_eval(*eq.right);
        Rational b = (v == 'x' ? l.bx - r.bx : l.by - r.by);
        Rational c = r.c - l.c;
        if (b == 0) throw EvalError("no unique solution");
        sol.variables[v] = c / b;
        return sol;
    }

    // two unknowns: bring both equations to bx*x + by*y = c and eliminate
    Rational a1, b1, c1, a2, b2, c2;
    for (std::size_t k = 0; k < 2; ++k) {
        const Equation& eq = system.equations[k];
        if (!eq.right) throw UnsupportedError("expression with variables but no '='");
        Affine l = affine_eval(*eq.left);
        Affine r = affine_eval(*eq.right);
        Rational bx = l.bx - r.bx;
        Rational by = l.by - r.by;
        Rational c = r.c - l.c;
        if (k == 0) { a1 = bx; b1 = by; c1 = c; }
        else { a2 = bx; b2 = by; c2 = c; }
    }
    Rational det = a1 * b2 - b1 * a2;
    if (det == 0) throw EvalError("no unique solution");
    sol.variables['x'] = (c1 * b2 - c2 * b1) / det;
    sol.variables['y'] = (a1 * c2 - a2 * c1) / det;
    return sol;
}

// ---------------------------------------------------------------------------
// Operation-DSL formulas
// ---------------------------------------------------------------------------

namespace {

bool                        // true when the op is one of the four arithmetic ones
formula_op_from_name(const std::string& name, FormulaStep::Op& op) {
    if (name == "add") { op = FormulaStep::Op::Add; return true; }
    if (name == "subtract") { op = FormulaStep::Op::Subtract; return true; }
    if (name == "multiply") { op = FormulaStep::Op::Multiply; return true; }
    if (name == "divide") { op = FormulaStep::Op::Divide; return true; }
    return false;
}

bool is_ident_char(char c) {
    return is_letter(c) || is_digit(c) || c == '_' || c == '.';
}

FormulaStep::Operand parse_operand(std::string_view text, std::size_t at,
                                   std::size_t step_index) {
    if (text.empty()) throw ParseError("empty operand", at);
    FormulaStep::Operand o;
    if (text[0] == 'n' && text.size() > 1 &&
        std::all_of(text.begin() + 1, text.end(), is_digit)) {
        o.kind = FormulaStep::Operand::Kind::Number;
        o.index = std::stoul(std::string(text.substr(1)));
        return o;
    }
    if (text[0] == '#' && text.size() > 1 &&
        std::all_of(text.begin() + 1, text.end(), is_digit)) {
        o.kind = FormulaStep::Operand::Kind::Step;
        o.index = std::stoul(std::string(text.substr(1)));
        if (o.index >= step_index)
            throw ParseError("step reference #" + std::to_string(o.index) +
                                 " does not point to an earlier step",
                             at);
        return o;
    }
    if (text.starts_with("const_")) {
        o.kind = FormulaStep::Operand::Kind::Constant;
        o.constant = std::string(text);
        return o;
    }
    throw ParseError("bad operand \"" + std::string(text) + "\"", at);
}

}  // namespace

FormulaProgram parse_formula(std::string_view text) {
    FormulaProgram program;
    std::size_t pos = 0;
    auto skip_separators = [&] {
        while (pos < text.size() &&
               (std::isspace(static_cast<unsigned char>(text[pos])) || text[pos] == '|'))
            ++pos;
    };
    for (;;) {
        skip_separators();
        if (pos >= text.size()) break;
        const std::size_t at = pos;
        std::size_t name_start = pos;
        while (pos < text.size() && (is_letter(text[pos]) || text[pos] == '_')) ++pos;
        std::string name(text.substr(name_start, pos - name_start));
        if (name.empty()) throw ParseError("expected operation name", at);

        FormulaStep step;
        const bool arithmetic = formula_op_from_name(name, step.op);
        if (!arithmetic)
            throw UnsupportedError("non-arithmetic operation \"" + name + "\"");

        if (pos >= text.size() || text[pos] != '(') throw ParseError("expected '('", pos);
        ++pos;
        std::vector<std::pair<std::string, std::size_t>> args;
        for (;;) {
            while (pos < text.size() && text[pos] == ' ') ++pos;
            std::size_t arg_at = pos;
            std::size_t arg_start = pos;
            while (pos < text.size() && (is_ident_char(text[pos]) || text[pos] == '#')) ++pos;
            args.emplace_back(std::string(text.substr(arg_start, pos - arg_start)), arg_at);
            while (pos < text.size() && text[pos] == ' ') ++pos;
            if (pos < text.size() && text[pos] == ',') {
                ++pos;
                continue;
            }
            break;
        }
        if (pos >= text.size() || text[pos] != ')') throw ParseError("expected ')'", pos);
        ++pos;
        if (args.size() != 2)
            throw ParseError("operation \"" + name + "\" takes 2 operands, got " +
                                 std::to_string(args.size()),
                             at);
        step.a = parse_operand(args[0].first, args[0].second, program.steps.size());
        step.b = parse_operand(args[1].first, args[1].second, program.steps.size());
        program.steps.push_back(std::move(step));
    }
    if (program.steps.empty()) throw ParseError("empty formula", 0);
    return program;
}

std::vector<Rational> extract_numbers(std::string_view text) {
    std::vector<Rational> out;
    for (const std::string& token : tokenize(text))
        if (is_numeric_token(token)) out.push_back(parse_number(token));
    return out;
}

Rational evaluate(const FormulaProgram& program, std::span<const Rational> numbers) {
    if (program.steps.empty()) throw EvalError("empty program");
    std::vector<Rational> values;
    values.reserve(program.steps.size());
    auto resolve = [&](const FormulaStep::Operand& o) -> Rational {
        switch (o.kind) {
            case FormulaStep::Operand::Kind::Number:
                if (o.index >= numbers.size())
                    throw EvalError("missing operand n" + std::to_string(o.index) +
                                    " (text has " + std::to_string(numbers.size()) +
                                    " numbers)");
                return numbers[o.index];
            case FormulaStep::Operand::Kind::Step:
                return values[o.index];
            case FormulaStep::Operand::Kind::Constant:
                throw UnsupportedError("external constant \"" + o.constant + "\"");
        }
        throw std::logic_error("bad operand kind");
    };
    for (const FormulaStep& step : program.steps) {
        Rational a = resolve(step.a);
        Rational b = resolve(step.b);
        switch (step.op) {
            case FormulaStep::Op::Add: values.push_back(a + b); break;
            case FormulaStep::Op::Subtract: values.push_back(a - b); break;
            case FormulaStep::Op::Multiply: values.push_back(a * b); break;
            case FormulaStep::Op::Divide:
                if (b == 0) throw EvalError("division by zero");
                values.push_back(a / b);
                break;
        }
    }
    return values.back();
}

// ---------------------------------------------------------------------------
// Answers and checking
// ---------------------------------------------------------------------------

namespace {

std::string strip_parentheticals(std::string_view raw) {
    std::string out;
    int depth = 0;
    for (char c : raw) {
        if (c == '(') { ++depth; continue; }
        if (c == ')') { if (depth > 0) --depth; continue; }
        if (depth == 0) out += c;
    }
    return out;
}

std::optional<Rational> first_number(const std::vector<std::string>& tokens) {
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (!is_numeric_token(tokens[i])) continue;
        Rational v = parse_number(tokens[i]);
        // spaced fraction: "3 / 4"
        if (i + 2 < tokens.size() && tokens[i + 1] == "/" && is_numeric_token(tokens[i + 2])) {
            Rational d = parse_number(tokens[i + 2]);
            if (d != 0) return v / d;
        }
        if (i > 0 && tokens[i - 1] == "-" && i == 1) return -v;
        return v;
    }
    return std::nullopt;
}

}  // namespace

AnswerValue parse_answer(std::string_view raw) {
    AnswerValue out;
    const std::string cleaned = strip_parentheticals(raw);

    // two labeled values: "950; 325"
    if (auto semi = cleaned.find(';'); semi != std::string::npos) {
        auto left = first_number(tokenize(cleaned.substr(0, semi)));
        auto right = first_number(tokenize(cleaned.substr(semi + 1)));
        if (left && right) {
            out.kind = AnswerValue::Kind::Pair;
            out.a = *left;
            out.b = *right;
            return out;
        }
    }

    const std::vector<std::string> tokens = tokenize(cleaned);
    // ratio: "16:9" or "16 : 9", both components positive
    for (std::size_t i = 0; i + 2 < tokens.size(); ++i) {
        if (is_numeric_token(tokens[i]) && tokens[i + 1] == ":" &&
            is_numeric_token(tokens[i + 2])) {
            Rational a = parse_number(tokens[i]);
            Rational b = parse_number(tokens[i + 2]);
            if (a > 0 && b > 0) {
                out.kind = AnswerValue::Kind::Ratio;
                out.a = a;
                out.b = b;
                return out;
            }
        }
    }
    if (auto v = first_number(tokens)) {
        out.kind = AnswerValue::Kind::Single;
        out.a = *v;
        return out;
    }
    out.kind = AnswerValue::Kind::NonNumeric;
    return out;
}

std::string_view check_status_name(CheckStatus s) {
    switch (s) {
        case CheckStatus::Consistent: return "consistent";
        case CheckStatus::Inconsistent: return "inconsistent";
        case CheckStatus::Unsupported: return "unsupported";
        case CheckStatus::NonNumericAnswer: return "non-numeric-answer";
    }
    return "unsupported";
}

namespace {

bool computed_matches(const std::vector<Rational>& computed, const AnswerValue& labeled) {
    switch (labeled.kind) {
        case AnswerValue::Kind::Single:
            return std::any_of(computed.begin(), computed.end(),
                               [&](const Rational& v) { return answers_match(v, labeled.a); });
        case AnswerValue::Kind::Pair: {
            if (computed.size() != 2) return false;
            const Rational& x = computed[0];
            const Rational& y = computed[1];
            return (answers_match(x, labeled.a) && answers_match(y, labeled.b)) ||
                   (answers_match(x, labeled.b) && answers_match(y, labeled.a));
        }
        case AnswerValue::Kind::Ratio: {
            const Rational target = labeled.a / labeled.b;  // proportional comparison
            if (computed.size() == 1) return answers_match(computed[0], target);
            if (computed.size() == 2 && computed[1] != 0)
                return answers_match(computed[0] / computed[1], target);
            return false;
        }
        case AnswerValue::Kind::NonNumeric:
            return false;
    }
    return false;
}

}  // namespace

CheckResult check(const ProblemRecord& record) {
    CheckResult result;
    result.labeled = parse_answer(record.answer);

    bool unsupported = false;
    bool contradiction = false;
    bool no_annotation = false;
    try {
        if (!record.equations.empty()) {
            std::string joined;
            for (const auto& e : record.equations) {
                if (!joined.empty()) joined += "; ";
                joined += e;
            }
            result.computed = solve(parse_equation(joined)).values();
        } else if (!record.formula.empty()) {
            const FormulaProgram program = parse_formula(record.formula);
            const std::vector<Rational> numbers = extract_numbers(record.analysis_text());
            result.computed = {evaluate(program, numbers)};
        } else {
            no_annotation = true;
            result.note = "no equation or formula annotation";
        }
    } catch (const EquationContradiction& e) {
        contradiction = true;
        result.computed = {e.expression_value};
        result.note = e.what();
    } catch (const UnsupportedError& e) {
        unsupported = true;
        result.note = e.what();
    } catch (const ParseError& e) {
        unsupported = true;
        result.note = e.what();
    } catch (const EvalError& e) {
        unsupported = true;
        result.note = e.what();
    }

    if (no_annotation) {
        result.status = CheckStatus::Unsupported;
    } else if (result.labeled.kind == AnswerValue::Kind::NonNumeric) {
        result.status = CheckStatus::NonNumericAnswer;
    } else if (unsupported) {
        result.status = CheckStatus::Unsupported;
    } else if (contradiction) {
        result.status = CheckStatus::Inconsistent;
    } else {
        result.status = computed_matches(result.computed, result.labeled)
                            ? CheckStatus::Consistent
                            : CheckStatus::Inconsistent;
    }
    return result;
}

std::map<CheckStatus, std::size_t> ConsistencyReport::counts() const {
    std::map<CheckStatus, std::size_t> out;
    for (const auto& [_, r] : results) ++out[r.status];
    return out;
}

double ConsistencyReport::fraction(CheckStatus s) const {
    if (results.empty()) return 0.0;
    std::size_t n = 0;
    for (const auto& [_, r] : results)
        if (r.status == s) ++n;
    return static_cast<double>(n) / static_cast<double>(results.size());
}

ConsistencyReport check_corpus(const Corpus& corpus, int threads) {
    std::vector<CheckResult> results(corpus.size());
    parallel_for(corpus.size(), std::max(1, threads),
                 [&](std::size_t i, int) { results[i] = check(corpus[i]); });
    ConsistencyReport report;
    for (std::size_t i = 0; i < corpus.size(); ++i)
        report.results.emplace(corpus[i].id, std::move(results[i]));
    return report;
}

EligibilityReport arithmetic_subset_filter(const Corpus& corpus) {
    EligibilityReport report;
    for (const auto& record : corpus.problems()) {
        std::string reason;
        if (!record.formula.empty()) {
            try {
                const FormulaProgram program = parse_formula(record.formula);
                std::map<std::pair<int, std::size_t>, int> ref_counts;
                for (const auto& step : program.steps) {
                    for (const auto* o : {&step.a, &step.b}) {
                        if (o->kind == FormulaStep::Operand::Kind::Constant) {
                            reason = "external constant \"" + o->constant + "\"";
                            break;
                        }
                        int kind = o->kind == FormulaStep::Operand::Kind::Number ? 0 : 1;
                        if (++ref_counts[{kind, o->index}] > 1) {
                            reason = std::string("reused operand ") +
                                     (kind == 0 ? "n" : "#") + std::to_string(o->index);
                            break;
                        }
                    }
                    if (!reason.empty()) break;
                }
                if (reason.empty()) {
                    // dry run so eligible records are guaranteed checkable
                    evaluate(program, extract_numbers(record.analysis_text()));
                }
            } catch (const UnsupportedError& e) {
                reason = e.what();
            } catch (const ParseError& e) {
                reason = std::string("syntax error: ") + e.what();
            } catch (const EvalError& e) {
                reason = std::string("evaluation failed: ") + e.what();
            }
        } else if (!record.equations.empty()) {
            try {
                std::string joined;
                for (const auto& e : record.equations) {
                    if (!joined.empty()) joined += "; ";
                    joined += e;
                }
                const EquationSystem system = parse_equation(joined);
                if (system.variables.size() >= 2) {
                    reason = "multiple variables";
                } else {
                    try {
                        solve(system);
                    } catch (const EquationContradiction&) {
                        // arithmetic-only and solvable in form; the consistency
                        // check will flag the mismatch
                    }
                }
            } catch (const UnsupportedError& e) {
                reason = e.what();
            } catch (const ParseError& e) {
                reason = std::string("syntax error: ") + e.what();
            } catch (const EvalError& e) {
                reason = std::string("evaluation failed: ") + e.what();
            }
        } else {
            reason = "no annotation";
        }

        if (reason.empty()) report.eligible.push_back(record.id);
        else report.excluded.emplace_back(record.id, reason);
    }
    return report;
}

}  // namespace mwpdiv
