#include "mwpdiv/diversity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mwpdiv/parallel.hpp"

namespace mwpdiv {

namespace {

struct RawScores {
    std::vector<double> score;
    std::vector<std::ptrdiff_t> nearest;  // -1 = none
};

// Max-similarity search for each target position against the indexed
// positions [0, index.indexed_count()), ascending, ties to the lowest
// position, stopping early once an exact match (sym = 1) is found. Pairs
// sharing no unigram are skipped: without smoothing their similarity is
// exactly 0, so skipping cannot change the max or the argmax (the default
// nearest is the lowest indexed position, which is what an exhaustive scan
// over all-zero similarities would select).
RawScores max_similarity(const NGramProfileSet& profiles, const SimilarityIndex& index,
                         const std::vector<std::size_t>& targets, bool exclude_self,
                         const BleuOptions& opts, int threads) {
    const std::size_t m = index.indexed_count();
    RawScores out;
    out.score.assign(targets.size(), 1.0);
    out.nearest.assign(targets.size(), -1);

    threads = std::max(1, threads);
    std::vector<std::vector<std::uint32_t>> stamps(
        static_cast<std::size_t>(threads), std::vector<std::uint32_t>(m, 0));
    std::vector<std::uint32_t> counters(static_cast<std::size_t>(threads), 0);

    parallel_for(targets.size(), threads, [&](std::size_t t, int w) {
        const std::size_t i = targets[t];
        double best = 0.0;
        std::ptrdiff_t best_j = -1;
        const std::size_t others = exclude_self && i < m ? m - 1 : m;
        if (others > 0) best_j = (exclude_self && i == 0) ? 1 : 0;

        if (profiles.length(i) == 0) {
            // empty sequences share nothing; max similarity stays 0
        } else if (!opts.smooth_zeros) {
            auto& stamp = stamps[static_cast<std::size_t>(w)];
            const std::uint32_t cur = ++counters[static_cast<std::size_t>(w)];
            profiles.for_each_unigram(i, [&](std::uint32_t g) {
                for (std::uint32_t j : index.postings()[g]) stamp[j] = cur;
            });
            for (std::size_t j = 0; j < m; ++j) {
                if (stamp[j] != cur) continue;
                if (exclude_self && j == i) continue;
                const double s = profiles.sym(i, j, opts);
                if (s > best) {
                    best = s;
                    best_j = static_cast<std::ptrdiff_t>(j);
                    if (best == 1.0) break;
                }
            }
        } else {
            // smoothing gives non-zero scores to pairs without shared
            // unigrams, so pruning is unsound; enumerate everything
            for (std::size_t j = 0; j < m; ++j) {
                if (exclude_self && j == i) continue;
                const double s = profiles.sym(i, j, opts);
                if (s > best) {
                    best = s;
                    best_j = static_cast<std::ptrdiff_t>(j);
                    if (best == 1.0) break;
                }
            }
        }
        out.score[t] = 1.0 - best;
        out.nearest[t] = best_j;
    });
    return out;
}

std::vector<std::size_t> order_by_id(const std::vector<const NormalizedProblem*>& ps) {
    std::vector<std::size_t> order(ps.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return ps[a]->id < ps[b]->id; });
    return order;
}

std::map<std::string, ScoreEntry> score_members(
    const std::vector<const NormalizedProblem*>& members, Channel ch,
    const BleuOptions& opts, int threads) {
    const std::vector<std::size_t> order = order_by_id(members);

    std::vector<const std::vector<std::string>*> seqs;
    seqs.reserve(order.size());
    for (std::size_t k : order) seqs.push_back(&channel_tokens(*members[k], ch));

    const NGramProfileSet profiles = NGramProfileSet::build(seqs);
    const SimilarityIndex index(profiles);
    std::vector<std::size_t> targets(order.size());
    std::iota(targets.begin(), targets.end(), std::size_t{0});
    const RawScores raw =
        max_similarity(profiles, index, targets, /*exclude_self=*/true, opts, threads);

    std::map<std::string, ScoreEntry> out;
    for (std::size_t k = 0; k < order.size(); ++k) {
        ScoreEntry e;
        e.score = raw.score[k];
        if (raw.nearest[k] >= 0)
            e.nearest = members[order[static_cast<std::size_t>(raw.nearest[k])]]->id;
        out.emplace(members[order[k]]->id, std::move(e));
    }
    if (out.size() != members.size())
        throw std::logic_error("group scoring: duplicate problem ids in group");
    return out;
}

void finalize_report(DiversityReport& report) {
    std::vector<double> values;
    values.reserve(report.scores.size());
    for (const auto& [_, e] : report.scores) values.push_back(e.score);
    report.problem_count = values.size();
    // summing in sorted-value order makes the mean independent of id names
    // and corpus order, so CLD is exactly permutation-invariant
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    std::size_t zeros = 0;
    for (double v : values) {
        sum += v;
        if (v == 0.0) ++zeros;
    }
    report.cld = values.empty() ? 0.0 : sum / static_cast<double>(values.size());
    report.zero_fraction =
        values.empty() ? 0.0 : static_cast<double>(zeros) / static_cast<double>(values.size());
    report.histogram = score_histogram(values);
}

}  // namespace

std::map<std::string, ScoreEntry> group_scores(const std::vector<NormalizedProblem>& group,
                                               Channel ch, const BleuOptions& opts,
                                               int threads) {
    std::vector<const NormalizedProblem*> members;
    members.reserve(group.size());
    for (const auto& p : group) members.push_back(&p);
    return score_members(members, ch, opts, threads);
}

std::map<std::string, ScoreEntry> ld_scores(const std::vector<NormalizedProblem>& group,
                                            const BleuOptions& opts, int threads) {
    return group_scores(group, Channel::Lexical, opts, threads);
}

std::map<std::string, ScoreEntry> sd_scores(const std::vector<NormalizedProblem>& group,
                                            const BleuOptions& opts, int threads) {
    return group_scores(group, Channel::Syntactic, opts, threads);
}

DiversityReport corpus_diversity(const Corpus& corpus, Channel ch,
                                 const DiversityOptions& options) {
    if (corpus.empty()) throw InputError("empty corpus");

    std::vector<NormalizedProblem> normalized(corpus.size());
    parallel_for(corpus.size(), std::max(1, options.threads), [&](std::size_t i, int) {
        normalized[i] = normalize_problem(corpus[i], options.sidecar);
    });

    DiversityReport report;
    report.channel = ch;
    const std::vector<ProblemGroup> groups = group_by_type(corpus, options.use_types);
    report.group_count = groups.size();
    for (const auto& g : groups) {
        std::vector<const NormalizedProblem*> members;
        members.reserve(g.members.size());
        for (std::size_t idx : g.members) members.push_back(&normalized[idx]);
        auto scores = score_members(members, ch, options.bleu, options.threads);
        report.scores.merge(scores);
    }
    finalize_report(report);
    return report;
}

CrossSetReport cross_set_diversity(const std::vector<NormalizedProblem>& test,
                                   const std::vector<NormalizedProblem>& train, Channel ch,
                                   const BleuOptions& opts, int threads) {
    if (train.empty()) throw InputError("empty training set");
    if (test.empty()) throw InputError("empty test set");

    std::vector<const NormalizedProblem*> train_ps, test_ps;
    for (const auto& p : train) train_ps.push_back(&p);
    for (const auto& p : test) test_ps.push_back(&p);
    const std::vector<std::size_t> train_order = order_by_id(train_ps);
    const std::vector<std::size_t> test_order = order_by_id(test_ps);

    std::vector<const std::vector<std::string>*> seqs;
    seqs.reserve(train.size() + test.size());
    for (std::size_t k : train_order) seqs.push_back(&channel_tokens(*train_ps[k], ch));
    for (std::size_t k : test_order) seqs.push_back(&channel_tokens(*test_ps[k], ch));

    const NGramProfileSet profiles = NGramProfileSet::build(seqs);
    const SimilarityIndex index(profiles, train.size());
    std::vector<std::size_t> targets(test.size());
    std::iota(targets.begin(), targets.end(), train.size());
    const RawScores raw =
        max_similarity(profiles, index, targets, /*exclude_self=*/false, opts, threads);

    CrossSetReport report;
    report.channel = ch;
    report.group_count = 1;
    for (std::size_t k = 0; k < test_order.size(); ++k) {
        ScoreEntry e;
        e.score = raw.score[k];
        if (raw.nearest[k] >= 0)
            e.nearest = train_ps[train_order[static_cast<std::size_t>(raw.nearest[k])]]->id;
        report.scores.emplace(test_ps[test_order[k]]->id, std::move(e));
    }
    finalize_report(report);
    return report;
}

std::array<std::uint64_t, 20> score_histogram(std::span<const double> scores) {
    std::array<std::uint64_t, 20> bins{};
    for (double s : scores) {
        if (!(s >= 0.0 && s <= 1.0))
            throw InputError("score outside [0,1]: " + std::to_string(s));
        auto b = static_cast<std::size_t>(std::floor(s / 0.05));
        if (b > 19) b = 19;
        ++bins[b];
    }
    return bins;
}

std::vector<DedupRow> dedup_report(const Corpus& corpus, Channel ch, double threshold,
                                   const DiversityOptions& options) {
    if (!(threshold >= 0.0 && threshold <= 1.0))
        throw InputError("threshold outside [0,1]: " + std::to_string(threshold));
    const DiversityReport report = corpus_diversity(corpus, ch, options);
    std::vector<DedupRow> rows;
    for (const auto& [id, e] : report.scores)
        if (e.score < threshold) rows.push_back({id, e.score, e.nearest});
    std::sort(rows.begin(), rows.end(), [](const DedupRow& a, const DedupRow& b) {
        if (a.score != b.score) return a.score < b.score;
        return a.id < b.id;
    });
    return rows;
}

}  // namespace mwpdiv
