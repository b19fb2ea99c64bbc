#include "mwpdiv/corpus.hpp"

#include <algorithm>
#include <array>
#include <random>
#include <set>
#include <sstream>
#include <unordered_set>

namespace mwpdiv {

namespace {

// Canonical taxonomy, grouped by category.
constexpr std::array<std::string_view, 14> kBasicArithmetic = {
    "Addition",     "Subtraction", "Difference",  "Multiplication",
    "Common-Division", "Floor-Division", "Ceil-Division", "Sum",
    "Surplus",      "Number-Operation", "TVQ-Initial", "TVQ-Change",
    "TVQ-Final",    "Multi-Step",
};
constexpr std::array<std::string_view, 6> kAggregative = {
    "Comparison", "Set-Operation", "Ratio", "Number-Pattern", "Algebra-1", "Algebra-2",
};
constexpr std::array<std::string_view, 4> kDomainKnowledge = {
    "GCD", "LCM", "Geometry", "UnitTrans",
};

}  // namespace

std::string_view type_category_name(TypeCategory c) {
    switch (c) {
        case TypeCategory::BasicArithmetic: return "BasicArithmetic";
        case TypeCategory::Aggregative: return "Aggregative";
        case TypeCategory::DomainKnowledge: return "DomainKnowledge";
        case TypeCategory::Extension: return "Extension";
    }
    return "Extension";
}

const std::vector<std::string>& canonical_type_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (auto n : kBasicArithmetic) v.emplace_back(n);
        for (auto n : kAggregative) v.emplace_back(n);
        for (auto n : kDomainKnowledge) v.emplace_back(n);
        return v;
    }();
    return names;
}

TypeCategory category_of(std::string_view type_name) {
    for (auto n : kBasicArithmetic)
        if (n == type_name) return TypeCategory::BasicArithmetic;
    for (auto n : kAggregative)
        if (n == type_name) return TypeCategory::Aggregative;
    for (auto n : kDomainKnowledge)
        if (n == type_name) return TypeCategory::DomainKnowledge;
    return TypeCategory::Extension;
}

TypeCategory ProblemType::category() const { return category_of(name); }

std::string ProblemRecord::analysis_text() const {
    if (body.empty()) return question;
    if (question.empty()) return body;
    return body + " " + question;
}

Corpus::Corpus(std::string name, std::vector<ProblemRecord> problems)
    : name_(std::move(name)), problems_(std::move(problems)) {
    std::unordered_set<std::string_view> seen;
    seen.reserve(problems_.size());
    for (const auto& p : problems_) {
        if (p.id.empty()) throw InputError("corpus '" + name_ + "': empty problem id");
        if (!seen.insert(p.id).second)
            throw InputError("corpus '" + name_ + "': duplicate id \"" + p.id + "\"");
        if (p.grade && (*p.grade < 1 || *p.grade > 6))
            throw InputError("corpus '" + name_ + "': id \"" + p.id + "\": grade " +
                             std::to_string(*p.grade) + " outside 1..6");
        if (!p.equations.empty() && !p.formula.empty())
            throw InputError("corpus '" + name_ + "': id \"" + p.id +
                             "\": both equations and formula present");
    }
}

std::vector<ProblemGroup> group_by_type(const Corpus& corpus, bool use_types) {
    const auto& ps = corpus.problems();
    if (ps.empty()) return {};

    std::size_t annotated = 0;
    for (const auto& p : ps)
        if (p.problem_type) ++annotated;

    if (use_types && annotated > 0 && annotated < ps.size()) {
        std::string msg = "group_by_type: use_types requested but these ids lack problem_type:";
        for (const auto& p : ps)
            if (!p.problem_type) msg += " \"" + p.id + "\"";
        throw InputError(msg);
    }

    if (!use_types || annotated == 0) {
        ProblemGroup all;
        all.members.resize(ps.size());
        for (std::size_t i = 0; i < ps.size(); ++i) all.members[i] = i;
        return {std::move(all)};
    }

    std::map<std::string, ProblemGroup> by_type;  // ordered by type name
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const std::string& t = ps[i].problem_type->name;
        auto& g = by_type[t];
        g.type_name = t;
        g.members.push_back(i);
    }
    std::vector<ProblemGroup> out;
    out.reserve(by_type.size());
    for (auto& [_, g] : by_type) out.push_back(std::move(g));
    return out;
}

std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

SplitSpec k_fold_split(const Corpus& corpus, int k, std::uint64_t seed) {
    if (k < 2) throw InputError("k_fold_split: k must be >= 2, got " + std::to_string(k));

    SplitSpec spec;
    spec.fold_count = k;
    spec.seed = seed;

    for (const auto& group : group_by_type(corpus, /*use_types=*/true)) {
        std::vector<std::size_t> order = group.members;
        // Fixed shuffle: mt19937_64 output is specified by the standard, and the
        // modulo reduction keeps the permutation identical across platforms.
        std::mt19937_64 rng(seed ^ fnv1a64(group.type_name));
        for (std::size_t i = order.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(rng() % i);
            std::swap(order[i - 1], order[j]);
        }
        for (std::size_t pos = 0; pos < order.size(); ++pos) {
            spec.assignment[corpus[order[pos]].id] = static_cast<int>(pos % static_cast<std::size_t>(k));
        }
        if (order.size() < static_cast<std::size_t>(k)) {
            std::ostringstream w;
            w << "group \"" << (group.type_name.empty() ? "<all>" : group.type_name)
              << "\" has " << order.size() << " problems, fewer than k=" << k
              << "; some folds are empty";
            spec.warnings.push_back(w.str());
        }
    }
    return spec;
}

}  // namespace mwpdiv
