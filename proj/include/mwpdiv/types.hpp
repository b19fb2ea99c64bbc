#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mwpdiv {

/// Malformed user input (files, flags, corpus contents). The CLI maps this
/// to exit code 2; internal invariant violations use std::logic_error.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class TypeCategory {
    BasicArithmetic,
    Aggregative,
    DomainKnowledge,
    Extension,  // type names outside the canonical taxonomy (corpus-specific labels)
};

std::string_view type_category_name(TypeCategory c);

/// A problem-type label. The 24 canonical names map to one of the three
/// taxonomy categories; anything else is kept verbatim as an extension type.
struct ProblemType {
    std::string name;

    TypeCategory category() const;
    bool operator==(const ProblemType&) const = default;
};

/// The 24 canonical problem-type names, grouped by category.
const std::vector<std::string>& canonical_type_names();
TypeCategory category_of(std::string_view type_name);

struct ProblemRecord {
    std::string id;
    std::string body;
    std::string question;                // empty when merged into body
    std::vector<std::string> equations;  // infix equations; exclusive with formula
    std::string formula;                 // operation-DSL step list
    std::string answer;                  // raw labeled answer
    std::optional<ProblemType> problem_type;
    std::optional<int> grade;            // 1..6
    std::string source;

    /// Text analyzed by the normalization pipeline: body, plus the question
    /// separated by one space when both are present.
    std::string analysis_text() const;
};

/// An ordered, immutable set of problems with unique non-empty ids.
class Corpus {
public:
    Corpus() = default;
    Corpus(std::string name, std::vector<ProblemRecord> problems);

    const std::string& name() const { return name_; }
    const std::vector<ProblemRecord>& problems() const { return problems_; }
    std::size_t size() const { return problems_.size(); }
    bool empty() const { return problems_.empty(); }
    const ProblemRecord& operator[](std::size_t i) const { return problems_[i]; }

private:
    std::string name_;
    std::vector<ProblemRecord> problems_;
};

}  // namespace mwpdiv
