#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mwpdiv/corpus.hpp"
#include "mwpdiv/similarity.hpp"

namespace mwpdiv {

struct ScoreEntry {
    double score = 1.0;
    std::optional<std::string> nearest;  // absent only for singleton groups
};

/// Per-problem diversity scores pooled over all groups of one corpus.
/// cld is the arithmetic mean of the scores; zero_fraction the fraction of
/// scores exactly 0; histogram has 20 uniform bins over [0,1], last bin
/// closed.
struct DiversityReport {
    Channel channel = Channel::Lexical;
    std::map<std::string, ScoreEntry> scores;
    double cld = 0.0;
    double zero_fraction = 0.0;
    std::array<std::uint64_t, 20> histogram{};
    std::size_t group_count = 0;
    std::size_t problem_count = 0;
};

// Test-against-train scores share the report shape.
using CrossSetReport = DiversityReport;

struct DiversityOptions {
    bool use_types = false;
    const AnnotationSidecar* sidecar = nullptr;
    BleuOptions bleu;
    int threads = 1;
};

/// score_i = 1 - max_{j != i} sym over norm_tokens; nearest is the argmax
/// (ties to the lowest id). Singleton groups score 1 with nearest absent.
std::map<std::string, ScoreEntry> ld_scores(const std::vector<NormalizedProblem>& group,
                                            const BleuOptions& opts = {}, int threads = 1);

/// Same over pos_tokens.
std::map<std::string, ScoreEntry> sd_scores(const std::vector<NormalizedProblem>& group,
                                            const BleuOptions& opts = {}, int threads = 1);

std::map<std::string, ScoreEntry> group_scores(const std::vector<NormalizedProblem>& group,
                                               Channel ch, const BleuOptions& opts = {},
                                               int threads = 1);

/// Normalizes, groups per options.use_types, scores each group, and pools
/// everything into one report (CLD is the unweighted mean over problems).
DiversityReport corpus_diversity(const Corpus& corpus, Channel ch,
                                 const DiversityOptions& options = {});

/// score = 1 - max over the whole training set (no self exclusion).
CrossSetReport cross_set_diversity(const std::vector<NormalizedProblem>& test,
                                   const std::vector<NormalizedProblem>& train, Channel ch,
                                   const BleuOptions& opts = {}, int threads = 1);

/// bin = min(19, floor(score / 0.05)); scores outside [0,1] are an error.
std::array<std::uint64_t, 20> score_histogram(std::span<const double> scores);

struct DedupRow {
    std::string id;
    double score = 0.0;
    std::optional<std::string> nearest;
};

/// Problems whose diversity score is below threshold, sorted ascending by
/// score then id. threshold must lie in [0,1].
std::vector<DedupRow> dedup_report(const Corpus& corpus, Channel ch, double threshold,
                                   const DiversityOptions& options = {});

}  // namespace mwpdiv
