// mwpdiv: diversity metrics and annotation-consistency checks for
// math-word-problem corpora.
//
// Exit codes: 0 success, 2 input/config error, 3 internal invariant failure.

#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <unordered_map>
#include <unordered_set>

#include "CLI11.hpp"
#include "json.hpp"

#include "mwpdiv/consistency.hpp"
#include "mwpdiv/corpus.hpp"
#include "mwpdiv/diversity.hpp"
#include "mwpdiv/ingest.hpp"
#include "mwpdiv/parallel.hpp"
#include "mwpdiv/report_io.hpp"

namespace fs = std::filesystem;
using namespace mwpdiv;

namespace {

struct CommonOpts {
    std::string input;
    std::string format = "canonical";
    std::string channel = "lexical";
    std::string sidecar;
    std::string out_dir;
    bool use_types = false;
    bool smooth = false;
    int threads = 0;
    double threshold = 0.1;
    int kfold = 0;
    std::uint64_t seed = 1;
    std::string test_path;
    std::string train_path;
};

void add_input_options(CLI::App* cmd, CommonOpts& o, bool with_channel = true) {
    cmd->add_option("-i,--input", o.input, "corpus file")->required();
    cmd->add_option("--format", o.format, "corpus file format")
        ->check(CLI::IsMember({"canonical", "asdiv", "mathqa"}))
        ->capture_default_str();
    if (with_channel) {
        cmd->add_option("--channel", o.channel, "token channel to score")
            ->check(CLI::IsMember({"lexical", "syntactic"}))
            ->capture_default_str();
    }
}

void add_pipeline_options(CLI::App* cmd, CommonOpts& o, bool with_use_types = true) {
    if (with_use_types) {
        cmd->add_flag("--use-types", o.use_types,
                      "score each problem-type group separately (requires annotations)");
    }
    cmd->add_option("--sidecar", o.sidecar, "token/POS/lemma sidecar file");
    cmd->add_option("--threads", o.threads, "worker threads (0 = auto)")
        ->check(CLI::Range(0, 1024))
        ->capture_default_str();
    cmd->add_flag("--smooth", o.smooth,
                  "floor zero n-gram precisions instead of zeroing the score");
}

LoadedCorpus load_input(const CommonOpts& o) {
    LoadedCorpus loaded = load_corpus(o.input, corpus_format_from_name(o.format));
    for (const auto& w : loaded.warnings) std::cerr << "warning: " << w << "\n";
    return loaded;
}

std::optional<AnnotationSidecar> load_sidecar_opt(const CommonOpts& o) {
    if (o.sidecar.empty()) return std::nullopt;
    return AnnotationSidecar::load(o.sidecar);
}

DiversityOptions make_div_options(const CommonOpts& o, const AnnotationSidecar* sc) {
    DiversityOptions opts;
    opts.use_types = o.use_types;
    opts.sidecar = sc;
    opts.bleu.smooth_zeros = o.smooth;
    opts.threads = resolve_threads(o.threads);
    return opts;
}

std::string out_path(const CommonOpts& o, const std::string& name) {
    return (fs::path(o.out_dir) / name).string();
}

void print_diversity_summary(const DiversityReport& r) {
    std::cout << "channel: " << channel_name(r.channel) << "\n"
              << "problems: " << r.problem_count << "\n"
              << "groups: " << r.group_count << "\n"
              << "cld: " << format_score(r.cld) << "\n"
              << "zero_fraction: " << format_score(r.zero_fraction) << "\n";
}

void write_diversity_files(const CommonOpts& o, const DiversityReport& r) {
    write_file_atomic(out_path(o, "scores.csv"), scores_csv(r));
    write_file_atomic(out_path(o, "histogram.csv"), histogram_csv(r.histogram));
    write_file_atomic(out_path(o, "summary.json"), diversity_summary_json(r));
}

int cmd_diversity(const CommonOpts& o) {
    const LoadedCorpus loaded = load_input(o);
    if (loaded.corpus.empty()) throw InputError("empty corpus: " + o.input);
    const auto sidecar = load_sidecar_opt(o);
    const DiversityReport report =
        corpus_diversity(loaded.corpus, channel_from_name(o.channel),
                         make_div_options(o, sidecar ? &*sidecar : nullptr));
    write_diversity_files(o, report);
    print_diversity_summary(report);
    return 0;
}

std::vector<NormalizedProblem> normalize_all(const Corpus& corpus,
                                             const AnnotationSidecar* sidecar, int threads) {
    std::vector<NormalizedProblem> out(corpus.size());
    parallel_for(corpus.size(), threads,
                 [&](std::size_t i, int) { out[i] = normalize_problem(corpus[i], sidecar); });
    return out;
}

int cmd_cross(const CommonOpts& o) {
    const Channel ch = channel_from_name(o.channel);
    const auto sidecar = load_sidecar_opt(o);
    const AnnotationSidecar* sc = sidecar ? &*sidecar : nullptr;
    const int threads = resolve_threads(o.threads);
    BleuOptions bleu_opts;
    bleu_opts.smooth_zeros = o.smooth;

    if (o.kfold > 0) {
        const LoadedCorpus loaded = load_input(o);
        if (loaded.corpus.empty()) throw InputError("empty corpus: " + o.input);
        const SplitSpec split = k_fold_split(loaded.corpus, o.kfold, o.seed);
        for (const auto& w : split.warnings) std::cerr << "warning: " << w << "\n";
        const std::vector<NormalizedProblem> normalized =
            normalize_all(loaded.corpus, sc, threads);

        nlohmann::json folds = nlohmann::json::array();
        double cld_sum = 0.0;
        std::size_t scored_folds = 0;
        for (int f = 0; f < o.kfold; ++f) {
            std::vector<NormalizedProblem> test, train;
            for (std::size_t i = 0; i < loaded.corpus.size(); ++i) {
                if (split.assignment.at(loaded.corpus[i].id) == f)
                    test.push_back(normalized[i]);
                else
                    train.push_back(normalized[i]);
            }
            nlohmann::json entry;
            entry["fold"] = f;
            if (test.empty() || train.empty()) {
                entry["skipped"] = "empty test or training side";
                folds.push_back(entry);
                continue;
            }
            const CrossSetReport r = cross_set_diversity(test, train, ch, bleu_opts, threads);
            char name[32];
            std::snprintf(name, sizeof name, "scores_fold%d.csv", f);
            write_file_atomic(out_path(o, name), scores_csv(r));
            entry["problems"] = r.problem_count;
            entry["cld"] = r.cld;
            entry["zero_fraction"] = r.zero_fraction;
            folds.push_back(entry);
            cld_sum += r.cld;
            ++scored_folds;
        }
        const double mean_cld =
            scored_folds == 0 ? 0.0 : cld_sum / static_cast<double>(scored_folds);
        nlohmann::json summary;
        summary["channel"] = std::string(channel_name(ch));
        summary["kfold"] = o.kfold;
        summary["seed"] = o.seed;
        summary["folds"] = folds;
        summary["mean_cld"] = mean_cld;
        write_file_atomic(out_path(o, "summary.json"), summary.dump(2) + "\n");
        std::cout << "folds: " << scored_folds << "\n"
                  << "mean_cld: " << format_score(mean_cld) << "\n";
        return 0;
    }

    const CorpusFormat format = corpus_format_from_name(o.format);
    LoadedCorpus test_loaded = load_corpus(o.test_path, format);
    LoadedCorpus train_loaded = load_corpus(o.train_path, format);
    for (const auto& w : test_loaded.warnings) std::cerr << "warning: " << w << "\n";
    for (const auto& w : train_loaded.warnings) std::cerr << "warning: " << w << "\n";
    if (test_loaded.corpus.empty()) throw InputError("empty corpus: " + o.test_path);
    if (train_loaded.corpus.empty()) throw InputError("empty corpus: " + o.train_path);

    const CrossSetReport report = cross_set_diversity(
        normalize_all(test_loaded.corpus, sc, threads),
        normalize_all(train_loaded.corpus, sc, threads), ch, bleu_opts, threads);
    write_diversity_files(o, report);
    print_diversity_summary(report);
    return 0;
}

int cmd_check(const CommonOpts& o, bool arith_only) {
    const LoadedCorpus loaded = load_input(o);
    if (loaded.corpus.empty()) throw InputError("empty corpus: " + o.input);
    const int threads = resolve_threads(o.threads);

    Corpus target = loaded.corpus;
    nlohmann::json eligibility;
    if (arith_only) {
        const EligibilityReport filter = arithmetic_subset_filter(loaded.corpus);
        write_file_atomic(out_path(o, "eligibility.csv"), eligibility_csv(filter));
        std::unordered_set<std::string> keep(filter.eligible.begin(), filter.eligible.end());
        std::vector<ProblemRecord> eligible;
        for (const auto& p : loaded.corpus.problems())
            if (keep.count(p.id)) eligible.push_back(p);
        target = Corpus(loaded.corpus.name(), std::move(eligible));
        eligibility["eligible"] = filter.eligible.size();
        eligibility["excluded"] = filter.excluded.size();
        std::cout << "eligible: " << filter.eligible.size() << "\n"
                  << "excluded: " << filter.excluded.size() << "\n";
    }

    const ConsistencyReport report = check_corpus(target, threads);
    write_file_atomic(out_path(o, "consistency.csv"), consistency_csv(report));
    std::string summary = consistency_summary_json(report);
    if (!eligibility.empty()) {
        nlohmann::json j = nlohmann::json::parse(summary);
        j["eligibility"] = eligibility;
        summary = j.dump(2) + "\n";
    }
    write_file_atomic(out_path(o, "summary.json"), summary);

    std::cout << "checked: " << report.results.size() << "\n";
    for (CheckStatus s : {CheckStatus::Consistent, CheckStatus::Inconsistent,
                          CheckStatus::Unsupported, CheckStatus::NonNumericAnswer}) {
        std::cout << check_status_name(s) << ": " << format_score(report.fraction(s)) << "\n";
    }
    return 0;
}

int cmd_dedup(const CommonOpts& o) {
    const LoadedCorpus loaded = load_input(o);
    if (loaded.corpus.empty()) throw InputError("empty corpus: " + o.input);
    const auto sidecar = load_sidecar_opt(o);
    const std::vector<DedupRow> rows =
        dedup_report(loaded.corpus, channel_from_name(o.channel), o.threshold,
                     make_div_options(o, sidecar ? &*sidecar : nullptr));
    write_file_atomic(out_path(o, "dedup.csv"), dedup_csv(rows));

    // pair each flagged problem with its nearest neighbor's text for review
    std::unordered_map<std::string, const ProblemRecord*> by_id;
    for (const auto& p : loaded.corpus.problems()) by_id[p.id] = &p;
    std::string pairs;
    for (const auto& r : rows) {
        pairs += r.id + "  score=" + format_score(r.score) + "\n";
        pairs += "  text: " + by_id.at(r.id)->analysis_text() + "\n";
        if (r.nearest) {
            pairs += "  nearest: " + *r.nearest + "\n";
            pairs += "  nearest text: " + by_id.at(*r.nearest)->analysis_text() + "\n";
        }
        pairs += "\n";
    }
    write_file_atomic(out_path(o, "pairs.txt"), pairs);
    std::cout << "flagged: " << rows.size() << " (threshold " << format_score(o.threshold)
              << ")\n";
    return 0;
}

int cmd_normalize(const CommonOpts& o) {
    const LoadedCorpus loaded = load_input(o);
    if (loaded.corpus.empty()) throw InputError("empty corpus: " + o.input);
    const auto sidecar = load_sidecar_opt(o);
    const std::vector<NormalizedProblem> normalized = normalize_all(
        loaded.corpus, sidecar ? &*sidecar : nullptr, resolve_threads(o.threads));
    write_file_atomic(out_path(o, "normalized.jsonl"), normalized_dump(normalized));
    std::cout << "normalized: " << normalized.size() << "\n";
    return 0;
}

int cmd_convert(const CommonOpts& o, const std::string& out_file) {
    const LoadedCorpus loaded = load_input(o);
    write_file_atomic(out_file, canonical_lines(loaded.corpus));
    std::cout << "converted: " << loaded.corpus.size() << " problems\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"diversity metrics and annotation-consistency checks for MWP corpora"};
    app.require_subcommand(1);

    CommonOpts o;
    std::function<int()> run;

    auto* diversity = app.add_subcommand(
        "diversity", "per-problem diversity scores, CLD, zero fraction, histogram");
    add_input_options(diversity, o);
    add_pipeline_options(diversity, o);
    diversity->add_option("-o,--out", o.out_dir, "output directory")->required();
    diversity->callback([&] { run = [&] { return cmd_diversity(o); }; });

    auto* cross = app.add_subcommand(
        "cross", "test-against-train diversity (explicit sets or k-fold splits)");
    cross->add_option("-i,--input", o.input, "corpus file (k-fold mode)");
    cross->add_option("--test", o.test_path, "test corpus file");
    cross->add_option("--train", o.train_path, "training corpus file");
    cross->add_option("--format", o.format, "corpus file format")
        ->check(CLI::IsMember({"canonical", "asdiv", "mathqa"}))
        ->capture_default_str();
    cross->add_option("--channel", o.channel, "token channel to score")
        ->check(CLI::IsMember({"lexical", "syntactic"}))
        ->capture_default_str();
    cross->add_option("--kfold", o.kfold, "number of folds (enables k-fold mode)")
        ->check(CLI::Range(2, 1000));
    cross->add_option("--seed", o.seed, "split seed")->capture_default_str();
    add_pipeline_options(cross, o, /*with_use_types=*/false);
    cross->add_option("-o,--out", o.out_dir, "output directory")->required();
    cross->callback([&] {
        if (o.kfold > 0) {
            if (o.input.empty())
                throw CLI::ValidationError("cross", "--kfold mode requires --input");
        } else if (o.test_path.empty() || o.train_path.empty()) {
            throw CLI::ValidationError("cross",
                                       "provide --test and --train, or --input with --kfold");
        }
        run = [&] { return cmd_cross(o); };
    });

    bool arith_only = false;
    auto* checkc =
        app.add_subcommand("check", "equation/formula vs labeled-answer consistency report");
    add_input_options(checkc, o, /*with_channel=*/false);
    checkc->add_flag("--arith-only", arith_only,
                     "filter to the arithmetic-eligible subset first");
    checkc->add_option("--threads", o.threads, "worker threads (0 = auto)")
        ->check(CLI::Range(0, 1024));
    checkc->add_option("-o,--out", o.out_dir, "output directory")->required();
    checkc->callback([&] { run = [&] { return cmd_check(o, arith_only); }; });

    auto* dedup = app.add_subcommand(
        "dedup", "near-duplicate curation report (scores below a threshold)");
    add_input_options(dedup, o);
    add_pipeline_options(dedup, o);
    dedup->add_option("--threshold", o.threshold, "flag scores strictly below this")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    dedup->add_option("-o,--out", o.out_dir, "output directory")->required();
    dedup->callback([&] { run = [&] { return cmd_dedup(o); }; });

    auto* normalize = app.add_subcommand(
        "normalize", "dump normalized token and POS sequences for audit");
    add_input_options(normalize, o, /*with_channel=*/false);
    normalize->add_option("--sidecar", o.sidecar, "token/POS/lemma sidecar file");
    normalize->add_option("--threads", o.threads, "worker threads (0 = auto)")
        ->check(CLI::Range(0, 1024));
    normalize->add_option("-o,--out", o.out_dir, "output directory")->required();
    normalize->callback([&] { run = [&] { return cmd_normalize(o); }; });

    std::string convert_out;
    auto* convert = app.add_subcommand("convert", "convert a corpus to the canonical format");
    add_input_options(convert, o, /*with_channel=*/false);
    convert->add_option("-o,--out", convert_out, "output file (canonical JSONL)")->required();
    convert->callback([&] { run = [&] { return cmd_convert(o, convert_out); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        return run();
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::logic_error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
