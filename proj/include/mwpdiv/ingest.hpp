#pragma once

#include <string>
#include <vector>

#include "mwpdiv/types.hpp"

namespace mwpdiv {

struct LoadedCorpus {
    Corpus corpus;
    std::vector<std::string> warnings;
};

enum class CorpusFormat { Canonical, Asdiv, Mathqa };
CorpusFormat corpus_format_from_name(std::string_view name);

/// Canonical corpus format: UTF-8, one JSON object per line with keys
/// "id", "body", "question", "equations" (array of strings), "formula",
/// "answer", "problem_type", "grade", "source". Only "id" and "body" are
/// required. Unknown keys are ignored with a warning; malformed lines and
/// duplicate ids are errors naming the line.
LoadedCorpus load_canonical(const std::string& path);

/// Symmetric writer for the canonical format.
std::string canonical_lines(const Corpus& corpus);
void save_canonical(const Corpus& corpus, const std::string& path);

/// Adapter for the official ASDiv XML distribution: every <Problem> element
/// maps ID/Grade/Source attributes and Body/Question/Solution-Type/Answer/
/// Formula children onto a record. Structural drift fails loudly, naming
/// the first offending element.
LoadedCorpus load_asdiv(const std::string& path);

/// Adapter for the official MathQA JSON distribution (an array of objects
/// with "Problem", "options", "correct", "linear_formula", "category").
/// The answer is the option text selected by "correct"; an unresolvable
/// option letter leaves the answer empty and records a warning.
LoadedCorpus load_mathqa(const std::string& path);

LoadedCorpus load_corpus(const std::string& path, CorpusFormat format);

}  // namespace mwpdiv
