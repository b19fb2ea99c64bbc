#pragma once

#include <string>
#include <vector>

#include "mwpdiv/consistency.hpp"
#include "mwpdiv/diversity.hpp"

namespace mwpdiv {

/// Writes via a temporary file in the same directory plus rename, so an
/// interrupted run never leaves a truncated report.
void write_file_atomic(const std::string& path, std::string_view content);

/// Stable shortest-ish decimal used in every CSV ("%.12g").
std::string format_score(double value);

// CSV layouts: scores "id,score,nearest_id"; histogram
// "bin_low,bin_high,count"; consistency "id,status,computed,labeled";
// dedup like scores. Rows are id-ordered.
std::string scores_csv(const DiversityReport& report);
std::string histogram_csv(const std::array<std::uint64_t, 20>& bins);
std::string diversity_summary_json(const DiversityReport& report);
std::string consistency_csv(const ConsistencyReport& report);
std::string consistency_summary_json(const ConsistencyReport& report);
std::string eligibility_csv(const EligibilityReport& report);
std::string dedup_csv(const std::vector<DedupRow>& rows);

/// One JSON object per line: {"id", "norm_tokens", "pos_tokens"}.
std::string normalized_dump(const std::vector<NormalizedProblem>& problems);

}  // namespace mwpdiv
