#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"

#include "mwpdiv/diversity.hpp"
#include "mwpdiv/normalize.hpp"
#include "mwpdiv/similarity.hpp"
#include "mwpdiv/types.hpp"

namespace mwpdiv::testing {

template <typename E, typename Fn>
void expect_throw_contains(Fn&& fn, const std::string& needle) {
    try {
        fn();
        const std::string msg = "expected exception containing \"" + needle + "\", none thrown";
        FAIL_CHECK(msg);
    } catch (const E& e) {
        const std::string text = e.what();
        if (text.find(needle) == std::string::npos) {
            const std::string msg =
                "exception text \"" + text + "\" does not contain \"" + needle + "\"";
            FAIL_CHECK(msg);
        }
    }
}

inline ProblemRecord make_record(std::string id, std::string body, std::string question = "",
                                 std::string type = "") {
    ProblemRecord r;
    r.id = std::move(id);
    r.body = std::move(body);
    r.question = std::move(question);
    if (!type.empty()) r.problem_type = ProblemType{std::move(type)};
    return r;
}

inline NormalizedProblem make_norm(std::string id, std::vector<std::string> tokens,
                                   std::vector<std::string> pos = {}) {
    NormalizedProblem p;
    p.id = std::move(id);
    p.norm_tokens = std::move(tokens);
    p.pos_tokens = std::move(pos);
    return p;
}

/// Zipf-ish sampler over ids [0, size): weight of rank r is 1/(r+1).
class ZipfSampler {
public:
    ZipfSampler(std::size_t size, std::mt19937_64& rng) : rng_(&rng) {
        cumulative_.reserve(size);
        double acc = 0.0;
        for (std::size_t r = 0; r < size; ++r) {
            acc += 1.0 / static_cast<double>(r + 1);
            cumulative_.push_back(acc);
        }
    }

    std::size_t next() {
        std::uniform_real_distribution<double> u(0.0, cumulative_.back());
        const double x = u(*rng_);
        auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), x);
        return static_cast<std::size_t>(it - cumulative_.begin());
    }

private:
    std::mt19937_64* rng_;
    std::vector<double> cumulative_;
};

/// Random corpus of pre-normalized problems over a Zipf vocabulary.
inline std::vector<NormalizedProblem> random_group(std::mt19937_64& rng, std::size_t count,
                                                   std::size_t vocab, std::size_t min_len = 1,
                                                   std::size_t max_len = 30) {
    ZipfSampler lemmas(vocab, rng);
    ZipfSampler tags(40, rng);
    std::uniform_int_distribution<std::size_t> len(min_len, max_len);
    std::vector<NormalizedProblem> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        NormalizedProblem p;
        char buf[16];
        std::snprintf(buf, sizeof buf, "r%05zu", i);
        p.id = buf;
        const std::size_t n = len(rng);
        for (std::size_t k = 0; k < n; ++k) {
            p.norm_tokens.push_back("w" + std::to_string(lemmas.next()));
            p.pos_tokens.push_back("T" + std::to_string(tags.next()));
        }
        out.push_back(std::move(p));
    }
    return out;
}

/// Test-only oracle: direct O(n^2) pairwise scan over the public sym_sim,
/// no index involved. Ascending id order, strict-improvement argmax, so
/// ties resolve to the lowest id exactly like the production scorer claims.
inline std::map<std::string, ScoreEntry> exhaustive_scores(
    const std::vector<NormalizedProblem>& group, Channel ch) {
    std::vector<const NormalizedProblem*> ps;
    for (const auto& p : group) ps.push_back(&p);
    std::sort(ps.begin(), ps.end(),
              [](const NormalizedProblem* a, const NormalizedProblem* b) { return a->id < b->id; });

    std::map<std::string, ScoreEntry> out;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        double best = 0.0;
        const NormalizedProblem* best_p = nullptr;
        for (std::size_t j = 0; j < ps.size(); ++j) {
            if (j == i) continue;
            const double s = sym_sim(*ps[i], *ps[j], ch);
            if (best_p == nullptr || s > best) {
                best = s;
                best_p = ps[j];
            }
        }
        ScoreEntry e;
        e.score = best_p == nullptr ? 1.0 : 1.0 - best;
        if (best_p != nullptr) e.nearest = best_p->id;
        out.emplace(ps[i]->id, std::move(e));
    }
    return out;
}

}  // namespace mwpdiv::testing
