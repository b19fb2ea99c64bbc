#include "mwpdiv/report_io.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "json.hpp"

namespace mwpdiv {

namespace fs = std::filesystem;
using nlohmann::json;

void write_file_atomic(const std::string& path, std::string_view content) {
    const fs::path target(path);
    const fs::path dir = target.has_parent_path() ? target.parent_path() : fs::path(".");
    std::error_code ec;
    fs::create_directories(dir, ec);

    static std::atomic<unsigned> counter{0};
    fs::path tmp =
        dir / (target.filename().string() + ".tmp" + std::to_string(counter.fetch_add(1)));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("cannot write file: " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw InputError("write failed: " + tmp.string());
    }
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw InputError("cannot rename " + tmp.string() + " to " + path + ": " + ec.message());
    }
}

std::string format_score(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

namespace {

// minimal CSV quoting: wrap fields containing separators or quotes
std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

std::string scores_csv(const DiversityReport& report) {
    std::string out = "id,score,nearest_id\n";
    for (const auto& [id, e] : report.scores) {
        out += csv_field(id);
        out += ',';
        out += format_score(e.score);
        out += ',';
        if (e.nearest) out += csv_field(*e.nearest);
        out += '\n';
    }
    return out;
}

std::string histogram_csv(const std::array<std::uint64_t, 20>& bins) {
    std::string out = "bin_low,bin_high,count\n";
    char buf[96];
    for (std::size_t b = 0; b < bins.size(); ++b) {
        std::snprintf(buf, sizeof buf, "%.2f,%.2f,%llu\n", 0.05 * static_cast<double>(b),
                      0.05 * static_cast<double>(b + 1),
                      static_cast<unsigned long long>(bins[b]));
        out += buf;
    }
    return out;
}

std::string diversity_summary_json(const DiversityReport& report) {
    json j;
    j["channel"] = std::string(channel_name(report.channel));
    j["problem_count"] = report.problem_count;
    j["group_count"] = report.group_count;
    j["cld"] = report.cld;
    j["zero_fraction"] = report.zero_fraction;
    j["histogram"] = report.histogram;
    return j.dump(2) + "\n";
}

std::string consistency_csv(const ConsistencyReport& report) {
    std::string out = "id,status,computed,labeled\n";
    for (const auto& [id, r] : report.results) {
        out += csv_field(id);
        out += ',';
        out += check_status_name(r.status);
        out += ',';
        std::string computed;
        for (const auto& v : r.computed) {
            if (!computed.empty()) computed += ';';
            computed += format_rational(v);
        }
        out += csv_field(computed);
        out += ',';
        std::string labeled;
        switch (r.labeled.kind) {
            case AnswerValue::Kind::Single:
                labeled = format_rational(r.labeled.a);
                break;
            case AnswerValue::Kind::Pair:
                labeled = format_rational(r.labeled.a) + ";" + format_rational(r.labeled.b);
                break;
            case AnswerValue::Kind::Ratio:
                labeled = format_rational(r.labeled.a) + ":" + format_rational(r.labeled.b);
                break;
            case AnswerValue::Kind::NonNumeric:
                labeled = "";
                break;
        }
        out += csv_field(labeled);
        out += '\n';
    }
    return out;
}

std::string consistency_summary_json(const ConsistencyReport& report) {
    json j;
    j["problem_count"] = report.results.size();
    json fractions, counts;
    for (CheckStatus s : {CheckStatus::Consistent, CheckStatus::Inconsistent,
                          CheckStatus::Unsupported, CheckStatus::NonNumericAnswer}) {
        const std::string key(check_status_name(s));
        fractions[key] = report.fraction(s);
        std::size_t n = 0;
        for (const auto& [_, r] : report.results)
            if (r.status == s) ++n;
        counts[key] = n;
    }
    j["fractions"] = fractions;
    j["counts"] = counts;
    return j.dump(2) + "\n";
}

std::string eligibility_csv(const EligibilityReport& report) {
    std::string out = "id,eligible,reason\n";
    for (const auto& id : report.eligible) {
        out += csv_field(id);
        out += ",yes,\n";
    }
    for (const auto& [id, reason] : report.excluded) {
        out += csv_field(id);
        out += ",no,";
        out += csv_field(reason);
        out += '\n';
    }
    return out;
}

std::string dedup_csv(const std::vector<DedupRow>& rows) {
    std::string out = "id,score,nearest_id\n";
    for (const auto& r : rows) {
        out += csv_field(r.id);
        out += ',';
        out += format_score(r.score);
        out += ',';
        if (r.nearest) out += csv_field(*r.nearest);
        out += '\n';
    }
    return out;
}

std::string normalized_dump(const std::vector<NormalizedProblem>& problems) {
    std::string out;
    for (const auto& p : problems) {
        json j;
        j["id"] = p.id;
        j["norm_tokens"] = p.norm_tokens;
        j["pos_tokens"] = p.pos_tokens;
        out += j.dump();
        out += '\n';
    }
    return out;
}

}  // namespace mwpdiv
