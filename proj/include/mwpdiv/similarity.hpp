#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mwpdiv/normalize.hpp"

namespace mwpdiv {

enum class Channel { Lexical, Syntactic };
std::string_view channel_name(Channel ch);
Channel channel_from_name(std::string_view name);
const std::vector<std::string>& channel_tokens(const NormalizedProblem& p, Channel ch);

struct BleuOptions {
    // When set, a zero n-gram precision is floored at 1/(2 * denominator)
    // instead of zeroing the whole score. Off by default; candidate pruning
    // is only sound when this is off.
    bool smooth_zeros = false;
};

/// Sentence BLEU of `candidate` against a single reference, n-grams up to
/// order N = min(4, |candidate|, |reference|), modified (clipped) precision,
/// brevity penalty min(1, e^(1 - |reference|/|candidate|)). Without
/// smoothing a zero precision at any order gives 0. Empty sequences are an
/// error.
double bleu(std::span<const std::string> candidate, std::span<const std::string> reference,
            const BleuOptions& opts = {});

/// (bleu(a,b) + bleu(b,a)) / 2 over the chosen channel's token sequences.
double sym_sim(const NormalizedProblem& a, const NormalizedProblem& b, Channel ch,
               const BleuOptions& opts = {});

/// Interned token sequences with precomputed n-gram counts (orders 1..4)
/// for one scoring context (a problem group, or train+test). Sequence order
/// is fixed at build time; positions index into it.
class NGramProfileSet {
public:
    static NGramProfileSet build(const std::vector<const std::vector<std::string>*>& sequences);

    std::size_t size() const { return profiles_.size(); }
    std::uint32_t length(std::size_t i) const { return profiles_[i].length; }
    std::size_t vocab_size() const { return vocab_size_; }

    /// Visits the distinct unigram ids of sequence i in ascending order.
    template <typename Fn>
    void for_each_unigram(std::size_t i, Fn&& fn) const {
        for (const auto& k : profiles_[i].grams[0].keys) fn(k[0]);
    }

    /// Directional BLEU from precomputed counts; identical arithmetic to
    /// bleu(). A zero-length side yields 0.
    double bleu_dir(std::size_t candidate, std::size_t reference,
                    const BleuOptions& opts = {}) const;
    /// Bidirectional similarity; exactly symmetric. Zero-length sequences
    /// score 0 against everything.
    double sym(std::size_t i, std::size_t j, const BleuOptions& opts = {}) const;

private:
    friend class SimilarityIndex;

    using Key = std::array<std::uint32_t, 4>;
    struct CountedGrams {
        std::vector<Key> keys;             // sorted
        std::vector<std::uint32_t> counts;  // parallel to keys
    };
    struct Profile {
        std::uint32_t length = 0;
        std::array<CountedGrams, 4> grams;  // order n at index n-1
    };

    void overlaps(std::size_t i, std::size_t j, int max_order, std::uint64_t out[4]) const;

    std::vector<Profile> profiles_;
    std::size_t vocab_size_ = 0;
};

/// Inverted unigram index over a profile set: position i is listed under
/// unigram g iff g occurs in sequence i. Pairs that share no unigram have
/// unsmoothed similarity exactly 0, so pruning by shared unigram is exact.
class SimilarityIndex {
public:
    SimilarityIndex() = default;
    /// Indexes positions [0, limit) of the profile set (all by default).
    explicit SimilarityIndex(const NGramProfileSet& profiles,
                             std::size_t limit = static_cast<std::size_t>(-1));

    /// Ascending positions j != i sharing at least one unigram with i.
    std::vector<std::size_t> candidates(std::size_t i) const;

    const std::vector<std::vector<std::uint32_t>>& postings() const { return postings_; }
    std::size_t indexed_count() const { return indexed_count_; }

private:
    const NGramProfileSet* profiles_ = nullptr;
    std::vector<std::vector<std::uint32_t>> postings_;  // unigram id -> ascending positions
    std::size_t indexed_count_ = 0;
};

}  // namespace mwpdiv
