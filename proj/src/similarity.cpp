#include "mwpdiv/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace mwpdiv {

namespace {

constexpr std::uint32_t kPad = 0xffffffffu;

// Shared arithmetic for every BLEU path. overlaps[n-1] holds the clipped
// match count for order n; the multiplication order is fixed so profile and
// direct computations are bit-identical.
double bleu_from_overlaps(const std::uint64_t overlaps[4], std::size_t len_cand,
                          std::size_t len_ref, int max_order, const BleuOptions& opts) {
    double product = 1.0;
    for (int n = 1; n <= max_order; ++n) {
        const double denom = static_cast<double>(len_cand - static_cast<std::size_t>(n) + 1);
        double p;
        if (overlaps[n - 1] == 0) {
            if (!opts.smooth_zeros) return 0.0;
            p = 1.0 / (2.0 * denom);
        } else {
            p = static_cast<double>(overlaps[n - 1]) / denom;
        }
        product *= p;
    }
    const double geo = std::pow(product, 1.0 / max_order);
    const double bp = len_cand >= len_ref
                          ? 1.0
                          : std::exp(1.0 - static_cast<double>(len_ref) /
                                               static_cast<double>(len_cand));
    return bp * geo;
}

using Key = std::array<std::uint32_t, 4>;

void count_grams(const std::vector<std::uint32_t>& ids, int n, std::vector<Key>& out_keys,
                 std::vector<std::uint32_t>& out_counts) {
    out_keys.clear();
    out_counts.clear();
    if (ids.size() < static_cast<std::size_t>(n)) return;
    const std::size_t total = ids.size() - static_cast<std::size_t>(n) + 1;
    std::vector<Key> keys;
    keys.reserve(total);
    for (std::size_t i = 0; i < total; ++i) {
        Key k{kPad, kPad, kPad, kPad};
        for (int d = 0; d < n; ++d) k[static_cast<std::size_t>(d)] = ids[i + static_cast<std::size_t>(d)];
        keys.push_back(k);
    }
    std::sort(keys.begin(), keys.end());
    for (std::size_t i = 0; i < keys.size();) {
        std::size_t j = i;
        while (j < keys.size() && keys[j] == keys[i]) ++j;
        out_keys.push_back(keys[i]);
        out_counts.push_back(static_cast<std::uint32_t>(j - i));
        i = j;
    }
}

std::uint64_t clipped_overlap(const std::vector<Key>& ka, const std::vector<std::uint32_t>& ca,
                              const std::vector<Key>& kb,
                              const std::vector<std::uint32_t>& cb) {
    std::uint64_t sum = 0;
    std::size_t i = 0, j = 0;
    while (i < ka.size() && j < kb.size()) {
        if (ka[i] < kb[j]) ++i;
        else if (kb[j] < ka[i]) ++j;
        else {
            sum += std::min(ca[i], cb[j]);
            ++i;
            ++j;
        }
    }
    return sum;
}

}  // namespace

std::string_view channel_name(Channel ch) {
    return ch == Channel::Lexical ? "lexical" : "syntactic";
}

Channel channel_from_name(std::string_view name) {
    if (name == "lexical") return Channel::Lexical;
    if (name == "syntactic") return Channel::Syntactic;
    throw InputError("unknown channel \"" + std::string(name) +
                     "\" (expected lexical or syntactic)");
}

const std::vector<std::string>& channel_tokens(const NormalizedProblem& p, Channel ch) {
    return ch == Channel::Lexical ? p.norm_tokens : p.pos_tokens;
}

double bleu(std::span<const std::string> candidate, std::span<const std::string> reference,
            const BleuOptions& opts) {
    if (candidate.empty() || reference.empty()) throw InputError("empty sequence");

    // local interning so counts key on exact tokens
    std::unordered_map<std::string_view, std::uint32_t> vocab;
    auto intern = [&vocab](std::span<const std::string> seq) {
        std::vector<std::uint32_t> ids;
        ids.reserve(seq.size());
        for (const auto& t : seq) {
            auto [it, _] = vocab.emplace(t, static_cast<std::uint32_t>(vocab.size()));
            ids.push_back(it->second);
        }
        return ids;
    };
    const std::vector<std::uint32_t> cand = intern(candidate);
    const std::vector<std::uint32_t> ref = intern(reference);

    const int max_order =
        static_cast<int>(std::min<std::size_t>({4, cand.size(), ref.size()}));
    std::uint64_t overlaps[4] = {0, 0, 0, 0};
    std::vector<Key> kc, kr;
    std::vector<std::uint32_t> cc, cr;
    for (int n = 1; n <= max_order; ++n) {
        count_grams(cand, n, kc, cc);
        count_grams(ref, n, kr, cr);
        overlaps[n - 1] = clipped_overlap(kc, cc, kr, cr);
    }
    return bleu_from_overlaps(overlaps, cand.size(), ref.size(), max_order, opts);
}

double sym_sim(const NormalizedProblem& a, const NormalizedProblem& b, Channel ch,
               const BleuOptions& opts) {
    const auto& ta = channel_tokens(a, ch);
    const auto& tb = channel_tokens(b, ch);
    return (bleu(ta, tb, opts) + bleu(tb, ta, opts)) / 2.0;
}

NGramProfileSet NGramProfileSet::build(
    const std::vector<const std::vector<std::string>*>& sequences) {
    NGramProfileSet set;
    set.profiles_.resize(sequences.size());
    std::unordered_map<std::string_view, std::uint32_t> vocab;
    for (std::size_t i = 0; i < sequences.size(); ++i) {
        const std::vector<std::string>& seq = *sequences[i];
        std::vector<std::uint32_t> ids;
        ids.reserve(seq.size());
        for (const auto& t : seq) {
            auto [it, _] = vocab.emplace(t, static_cast<std::uint32_t>(vocab.size()));
            ids.push_back(it->second);
        }
        Profile& p = set.profiles_[i];
        p.length = static_cast<std::uint32_t>(ids.size());
        for (int n = 1; n <= 4; ++n) {
            auto& g = p.grams[static_cast<std::size_t>(n - 1)];
            count_grams(ids, n, g.keys, g.counts);
        }
    }
    set.vocab_size_ = vocab.size();
    return set;
}

void NGramProfileSet::overlaps(std::size_t i, std::size_t j, int max_order,
                               std::uint64_t out[4]) const {
    const Profile& a = profiles_[i];
    const Profile& b = profiles_[j];
    for (int n = 1; n <= max_order; ++n) {
        const auto& ga = a.grams[static_cast<std::size_t>(n - 1)];
        const auto& gb = b.grams[static_cast<std::size_t>(n - 1)];
        std::uint64_t sum = 0;
        std::size_t x = 0, y = 0;
        while (x < ga.keys.size() && y < gb.keys.size()) {
            if (ga.keys[x] < gb.keys[y]) ++x;
            else if (gb.keys[y] < ga.keys[x]) ++y;
            else {
                sum += std::min(ga.counts[x], gb.counts[y]);
                ++x;
                ++y;
            }
        }
        out[n - 1] = sum;
    }
}

double NGramProfileSet::bleu_dir(std::size_t candidate, std::size_t reference,
                                 const BleuOptions& opts) const {
    const std::size_t lc = profiles_[candidate].length;
    const std::size_t lr = profiles_[reference].length;
    if (lc == 0 || lr == 0) return 0.0;
    const int max_order = static_cast<int>(std::min<std::size_t>({4, lc, lr}));
    std::uint64_t ov[4] = {0, 0, 0, 0};
    overlaps(candidate, reference, max_order, ov);
    return bleu_from_overlaps(ov, lc, lr, max_order, opts);
}

double NGramProfileSet::sym(std::size_t i, std::size_t j, const BleuOptions& opts) const {
    const std::size_t li = profiles_[i].length;
    const std::size_t lj = profiles_[j].length;
    if (li == 0 || lj == 0) return 0.0;
    const int max_order = static_cast<int>(std::min<std::size_t>({4, li, lj}));
    std::uint64_t ov[4] = {0, 0, 0, 0};
    overlaps(i, j, max_order, ov);
    const double fwd = bleu_from_overlaps(ov, li, lj, max_order, opts);
    const double rev = bleu_from_overlaps(ov, lj, li, max_order, opts);
    return (fwd + rev) / 2.0;
}

SimilarityIndex::SimilarityIndex(const NGramProfileSet& profiles, std::size_t limit)
    : profiles_(&profiles) {
    indexed_count_ = std::min(limit, profiles.size());
    postings_.resize(profiles.vocab_size());
    for (std::size_t i = 0; i < indexed_count_; ++i) {
        const auto& keys = profiles.profiles_[i].grams[0].keys;
        for (const auto& k : keys) postings_[k[0]].push_back(static_cast<std::uint32_t>(i));
    }
}

std::vector<std::size_t> SimilarityIndex::candidates(std::size_t i) const {
    std::vector<char> seen(indexed_count_, 0);
    const auto& keys = profiles_->profiles_[i].grams[0].keys;
    for (const auto& k : keys) {
        if (k[0] >= postings_.size()) continue;
        for (std::uint32_t j : postings_[k[0]]) seen[j] = 1;
    }
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < seen.size(); ++j)
        if (seen[j] && j != i) out.push_back(j);
    return out;
}

}  // namespace mwpdiv
