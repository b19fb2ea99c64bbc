#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mwpdiv/types.hpp"

namespace mwpdiv {

/// One partition cell produced by group_by_type: positions into the source
/// corpus, in corpus order. type_name is empty for the whole-corpus group.
struct ProblemGroup {
    std::string type_name;
    std::vector<std::size_t> members;
};

/// Partitions a corpus for per-type scoring.
///
/// use_types=true requires either a fully annotated corpus (one group per
/// distinct type, groups ordered by type name) or a fully unannotated one
/// (single group). A partially annotated corpus is an error naming the
/// unannotated ids. use_types=false always yields the single whole-corpus
/// group. An empty corpus yields no groups.
std::vector<ProblemGroup> group_by_type(const Corpus& corpus, bool use_types);

struct SplitSpec {
    int fold_count = 0;
    std::uint64_t seed = 0;
    std::map<std::string, int> assignment;  // problem id -> fold index in [0, fold_count)
    std::vector<std::string> warnings;
};

/// Deterministic per-type k-fold assignment.
///
/// Within each type group the ids are shuffled with a seeded mt19937_64
/// (Fisher-Yates, modulo reduction; group seed = seed XOR FNV-1a of the type
/// name) and dealt round-robin, so fold sizes within a group differ by at
/// most one. Groups smaller than k leave some folds empty and record a
/// warning. Requires k >= 2 and a fully annotated corpus (falls back to a
/// single group when no problem is annotated).
SplitSpec k_fold_split(const Corpus& corpus, int k, std::uint64_t seed);

/// FNV-1a 64-bit; fixed across platforms (used for per-group seeds).
std::uint64_t fnv1a64(std::string_view text);

}  // namespace mwpdiv
