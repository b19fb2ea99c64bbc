#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mwpdiv/types.hpp"

namespace mwpdiv {

struct TokenAnnotation {
    std::string surface;
    std::string pos;    // Penn-Treebank-style tag
    std::string lemma;  // lowercase
};

/// Output of the normalization pipeline for one problem.
///
/// norm_tokens: lemmas and meta symbols with stop words removed; quantities
/// appear as [NUMk] and recognized person names as [NAMEk], k assigned in
/// order of first appearance (same surface value reuses the same k).
/// pos_tokens: tag sequence of the full token stream, before stop-word
/// removal; substituted positions keep their original tags.
struct NormalizedProblem {
    std::string id;
    std::vector<std::string> norm_tokens;
    std::vector<std::string> pos_tokens;
};

/// Pre-annotated tokens/tags/lemmas keyed by problem id. When an entry is
/// present it replaces the built-in tokenizer, tagger and lemmatizer for
/// that problem, so output from an external toolchain can be reproduced
/// exactly. File format: one JSON object per line with keys
/// "id", "tokens", "pos", "lemmas" (three equal-length arrays).
class AnnotationSidecar {
public:
    struct Entry {
        std::vector<std::string> tokens;
        std::vector<std::string> pos;
        std::vector<std::string> lemmas;
    };

    static AnnotationSidecar load(const std::string& path);

    void add(const std::string& id, Entry entry);
    const Entry* find(const std::string& id) const;
    std::size_t size() const { return entries_.size(); }

private:
    std::unordered_map<std::string, Entry> entries_;
};

/// Deterministic Penn-Treebank-style tokenization: splits punctuation,
/// keeps decimal numbers, comma-grouped integers, simple fractions and
/// known abbreviations as single tokens, splits contractions, and keeps
/// bracketed meta symbols ([NUM1], [NAME2]) intact.
std::vector<std::string> tokenize(std::string_view text);

/// Baseline tagger: lexicon lookup, then suffix heuristics, then the
/// fallback rules (NN for lowercase unknowns, NNP for capitalized tokens
/// that are not sentence-initial).
std::vector<std::string> pos_tag(const std::vector<std::string>& tokens);

/// Lowercase lemma via an exception table plus POS-keyed suffix rules
/// (plural nouns, verb inflections). Non-alphabetic tokens pass through
/// lowercased.
std::string lemmatize(std::string_view token, std::string_view pos);

/// tokenize + pos_tag + lemmatize, zipped.
std::vector<TokenAnnotation> annotate(std::string_view text);

bool is_stopword(std::string_view lemma);
bool is_meta_symbol(std::string_view token);
/// Numeric quantity pattern: integers (with comma groups), decimals,
/// and simple fractions "a/b".
bool is_numeric_token(std::string_view token);
bool in_name_gazetteer(std::string_view surface);

/// Full pipeline: tokenize -> tag -> lemmatize -> quantity substitution ->
/// person-name substitution -> stop-word removal. A sidecar entry, when
/// present for the record's id, replaces the first three steps verbatim.
NormalizedProblem normalize_problem(const ProblemRecord& record,
                                    const AnnotationSidecar* sidecar = nullptr);

/// Same pipeline over an explicit annotated token stream.
NormalizedProblem normalize_tokens(const std::string& id,
                                   const std::vector<std::string>& tokens,
                                   const std::vector<std::string>& pos,
                                   const std::vector<std::string>& lemmas);

}  // namespace mwpdiv
