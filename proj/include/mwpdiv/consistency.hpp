#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "mwpdiv/rational.hpp"
#include "mwpdiv/types.hpp"

namespace mwpdiv {

/// Equation/formula text that parses but lies outside the supported
/// fragment: non-arithmetic operations, named constants at evaluation,
/// more than two variables, nonlinear forms.
class UnsupportedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed equation or formula text; carries a character position.
class ParseError : public InputError {
public:
    ParseError(const std::string& what, std::size_t position)
        : InputError(what + " at position " + std::to_string(position)),
          position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_ = 0;
};

/// Evaluation failed (missing operand, division by zero, singular system).
class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A variable-free equation whose two constant sides differ; carries the
/// value of the expression side for reporting.
class EquationContradiction : public std::runtime_error {
public:
    EquationContradiction(const std::string& what, Rational expression_value)
        : std::runtime_error(what), expression_value(std::move(expression_value)) {}
    Rational expression_value;
};

// --- infix equations -------------------------------------------------------

struct Expr {
    enum class Kind { Number, Variable, Binary };
    Kind kind = Kind::Number;
    Rational value;  // Number
    char var = 0;    // Variable: 'x' or 'y'
    char op = 0;     // Binary: + - * /
    std::unique_ptr<Expr> lhs, rhs;
};

struct Equation {
    std::unique_ptr<Expr> left;
    std::unique_ptr<Expr> right;  // null for a bare expression without '='
};

struct EquationSystem {
    std::vector<Equation> equations;  // 1 with <=1 variable, or 2 with {x,y}
    std::set<char> variables;
};

/// Parses ';'-separated infix equations: +,-,*,/ with the usual precedence,
/// left associativity, parentheses, unary minus, decimal numbers, variables
/// x and y. Other letters are unsupported (a third variable); longer words
/// and stray symbols are syntax errors with a character position.
EquationSystem parse_equation(std::string_view text);

// --- operation-DSL formulas -------------------------------------------------

struct FormulaStep {
    enum class Op { Add, Subtract, Multiply, Divide };
    struct Operand {
        enum class Kind { Number, Step, Constant };
        Kind kind = Kind::Number;
        std::size_t index = 0;     // nK / #K
        std::string constant;      // named constant, verbatim
    };
    Op op = Op::Add;
    Operand a, b;
};

struct FormulaProgram {
    std::vector<FormulaStep> steps;  // step refs point only to earlier steps
};

/// Parses a whitespace- or '|'-separated sequence of op(arg,arg) steps with
/// op in {add, subtract, multiply, divide} and operands nK, #K or const_*.
/// A well-formed step with any other op name is unsupported.
FormulaProgram parse_formula(std::string_view text);

/// Quantities in order of appearance, matched with the same numeric pattern
/// the normalization pipeline uses (integers, comma groups, decimals,
/// simple fractions; a "$" prefix is skipped).
std::vector<Rational> extract_numbers(std::string_view text);

/// Exact evaluation; the result is the last step's value.
Rational evaluate(const FormulaProgram& program, std::span<const Rational> numbers);

struct Solution {
    std::optional<Rational> constant;       // variable-free result
    std::map<char, Rational> variables;     // solved values, keyed 'x'/'y'

    std::vector<Rational> values() const;   // constant, or variables in x,y order
};

/// Variable-free: evaluates both sides and requires equality (a bare
/// expression yields its value). One variable: affine normalization of both
/// sides. Two variables: 2x2 elimination. Nonlinear forms are unsupported;
/// singular systems raise EvalError("no unique solution").
Solution solve(const EquationSystem& system);

// --- answers and checking ---------------------------------------------------

struct AnswerValue {
    enum class Kind { Single, Pair, Ratio, NonNumeric };
    Kind kind = Kind::NonNumeric;
    Rational a, b;  // Single: a; Pair and Ratio: a, b
};

/// First numeric value with units and parentheticals stripped; "a:b" with
/// positive components is a ratio; two ';'-separated numeric values are a
/// pair; no numeric content is NonNumeric (a value, not an error).
AnswerValue parse_answer(std::string_view raw);

enum class CheckStatus { Consistent, Inconsistent, Unsupported, NonNumericAnswer };
std::string_view check_status_name(CheckStatus s);

struct CheckResult {
    CheckStatus status = CheckStatus::Unsupported;
    std::vector<Rational> computed;  // may be empty when nothing evaluated
    AnswerValue labeled;
    std::string note;  // failure detail for unsupported records
};

/// Computes the record's value from its equations (solve) or formula
/// (extract_numbers + evaluate) and compares with the labeled answer at
/// relative tolerance 1e-6. Ratios compare by cross-multiplication, pairs
/// as sets. Every failure mode is a status, never an exception.
CheckResult check(const ProblemRecord& record);

struct ConsistencyReport {
    std::map<std::string, CheckResult> results;  // id -> result
    std::map<CheckStatus, std::size_t> counts() const;
    double fraction(CheckStatus s) const;
};

ConsistencyReport check_corpus(const Corpus& corpus, int threads = 1);

struct EligibilityReport {
    std::vector<std::string> eligible;                          // ids, corpus order
    std::vector<std::pair<std::string, std::string>> excluded;  // id, reason
};

/// The arithmetic-subset filter: a record is eligible iff its formula uses
/// only the four operations with no named constants, no operand ref (nK or
/// #K) used twice, and evaluates cleanly against the text's numbers; or its
/// equations are variable-free or single-variable linear and solve cleanly.
EligibilityReport arithmetic_subset_filter(const Corpus& corpus);

}  // namespace mwpdiv
