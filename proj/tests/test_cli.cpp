// Drives the installed CLI binary end to end through temp files.

#include "doctest.h"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#ifndef MWPDIV_CLI_PATH
#error "MWPDIV_CLI_PATH must point at the mwpdiv binary"
#endif

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(MWPDIV_CLI_PATH) + " " + args + " 2>&1";
    std::array<char, 4096> buf{};
    RunResult result;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe))
        result.output.append(buf.data(), n);
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

fs::path workspace() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / "mwpdiv_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

fs::path write_file(const std::string& name, const std::string& content) {
    const fs::path p = workspace() / name;
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << content;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kSmallCorpus =
    R"({"id":"p1","body":"A train running at the speed of 100 km/hr crosses a pole in 18 seconds.","question":"What is the length of the train ?","answer":"500"})"
    "\n"
    R"({"id":"p2","body":"A train running at the speed of 120 km/hr crosses a pole in 9 seconds.","question":"Find the length of the train ?","answer":"300"})"
    "\n"
    R"({"id":"p3","body":"Wendy baked 41 cupcakes and 31 cookies for the sale.","question":"How many pastries did she make?","answer":"72","equations":["x = 41+31"]})"
    "\n";

}  // namespace

TEST_CASE("cli: diversity writes reports and prints the summary") {
    write_file("small.jsonl", kSmallCorpus);
    const fs::path out = workspace() / "div_out";
    RunResult r = run_cli("diversity -i " + (workspace() / "small.jsonl").string() + " -o " +
                          out.string());
    CHECK_EQ(r.exit_code, 0);
    CHECK(r.output.find("cld:") != std::string::npos);
    CHECK(r.output.find("zero_fraction:") != std::string::npos);

    const std::string scores = slurp(out / "scores.csv");
    CHECK(scores.find("id,score,nearest_id") == 0);
    CHECK(scores.find("p1,0,p2") != std::string::npos);
    CHECK(scores.find("p3,1,") != std::string::npos);

    auto summary = nlohmann::json::parse(slurp(out / "summary.json"));
    CHECK_EQ(summary["problem_count"], 3);
    CHECK_EQ(summary["channel"], "lexical");
    CHECK_EQ(summary["zero_fraction"].get<double>(), doctest::Approx(2.0 / 3.0));

    const std::string hist = slurp(out / "histogram.csv");
    CHECK(hist.find("bin_low,bin_high,count") == 0);
    CHECK(hist.find("0.95,1.00,1") != std::string::npos);
}

TEST_CASE("cli: byte-identical output across thread counts and reruns") {
    write_file("small.jsonl", kSmallCorpus);
    std::vector<std::string> outputs;
    for (const std::string threads : {"1", "4", "8", "4"}) {
        const fs::path out = workspace() / ("div_t" + threads);
        fs::remove_all(out);
        RunResult r = run_cli("diversity -i " + (workspace() / "small.jsonl").string() +
                              " --threads " + threads + " -o " + out.string());
        REQUIRE_EQ(r.exit_code, 0);
        outputs.push_back(slurp(out / "scores.csv") + slurp(out / "summary.json") +
                          slurp(out / "histogram.csv"));
    }
    for (std::size_t i = 1; i < outputs.size(); ++i) CHECK_EQ(outputs[0], outputs[i]);
}

TEST_CASE("cli: empty corpus and bad flags exit 2") {
    write_file("empty.jsonl", "");
    RunResult empty = run_cli("diversity -i " + (workspace() / "empty.jsonl").string() +
                              " -o " + (workspace() / "never").string());
    CHECK_EQ(empty.exit_code, 2);
    CHECK(empty.output.find("empty corpus") != std::string::npos);

    RunResult badflag = run_cli("diversity -i x.jsonl --channel bogus -o y");
    CHECK_EQ(badflag.exit_code, 2);

    RunResult missing = run_cli("diversity -i " + (workspace() / "nonexistent.jsonl").string() +
                                " -o " + (workspace() / "never2").string());
    CHECK_EQ(missing.exit_code, 2);

    RunResult nosub = run_cli("");
    CHECK_NE(nosub.exit_code, 0);
}

TEST_CASE("cli: cross with test = train yields all-zero scores") {
    write_file("small.jsonl", kSmallCorpus);
    const fs::path out = workspace() / "cross_out";
    RunResult r = run_cli("cross --test " + (workspace() / "small.jsonl").string() +
                          " --train " + (workspace() / "small.jsonl").string() + " -o " +
                          out.string());
    CHECK_EQ(r.exit_code, 0);
    auto summary = nlohmann::json::parse(slurp(out / "summary.json"));
    CHECK_EQ(summary["zero_fraction"].get<double>(), 1.0);
    CHECK_EQ(summary["cld"].get<double>(), 0.0);
}

TEST_CASE("cli: k-fold cross mode reports per-fold and mean CLD") {
    std::string corpus;
    for (int i = 0; i < 8; ++i) {
        corpus += R"({"id":"k)" + std::to_string(i) +
                  R"(","body":"Liam counted )" + std::to_string(10 + i) +
                  R"( marbles in the jar.","problem_type":"Sum"})" + "\n";
    }
    write_file("kfold.jsonl", corpus);
    const fs::path out = workspace() / "kfold_out";
    RunResult r = run_cli("cross -i " + (workspace() / "kfold.jsonl").string() +
                          " --kfold 4 --seed 9 -o " + out.string());
    CHECK_EQ(r.exit_code, 0);
    CHECK(r.output.find("mean_cld:") != std::string::npos);
    auto summary = nlohmann::json::parse(slurp(out / "summary.json"));
    CHECK_EQ(summary["folds"].size(), 4);
    // identical sentence patterns: every fold's cross-set CLD is 0
    CHECK_EQ(summary["mean_cld"].get<double>(), 0.0);
    CHECK(fs::exists(out / "scores_fold0.csv"));
}

TEST_CASE("cli: check reports statuses; --arith-only filters first") {
    const std::string corpus =
        R"fix({"id":"c1","body":"A sandwich is priced at $0.75. Tim bought 2 sandwiches and 4 cups at $0.25.","answer":"2.5 (dollars)","equations":["0.75*2+0.25*4 = 2.5"]})fix"
        "\n"
        R"fix({"id":"c2","body":"the lcm is 495 and hcf is 5 with sum 10","answer":"10","formula":"multiply(n0,n1) divide(#0,n2)"})fix"
        "\n"
        R"fix({"id":"c3","body":"powers 2 and 3","answer":"8","formula":"power(n0,n1)"})fix"
        "\n";
    write_file("check.jsonl", corpus);
    const fs::path out = workspace() / "check_out";
    RunResult r =
        run_cli("check -i " + (workspace() / "check.jsonl").string() + " -o " + out.string());
    CHECK_EQ(r.exit_code, 0);
    const std::string csv = slurp(out / "consistency.csv");
    CHECK(csv.find("c1,consistent,2.5,2.5") != std::string::npos);
    CHECK(csv.find("c2,inconsistent,247.5,10") != std::string::npos);
    CHECK(csv.find("c3,unsupported") != std::string::npos);

    const fs::path out2 = workspace() / "check_arith_out";
    RunResult r2 = run_cli("check --arith-only -i " + (workspace() / "check.jsonl").string() +
                           " -o " + out2.string());
    CHECK_EQ(r2.exit_code, 0);
    CHECK(r2.output.find("eligible: 2") != std::string::npos);
    const std::string elig = slurp(out2 / "eligibility.csv");
    CHECK(elig.find("c3,no,") != std::string::npos);
    // the filtered stage only checks eligible records
    CHECK(slurp(out2 / "consistency.csv").find("c3") == std::string::npos);

    // a corpus whose only formula is non-arithmetic: 0 eligible, reason listed
    write_file("nonarith.jsonl",
               R"fix({"id":"n1","body":"powers 2 and 3","answer":"8","formula":"power(n0,n1)"})fix"
               "\n");
    const fs::path out3 = workspace() / "check_none_out";
    RunResult r3 = run_cli("check --arith-only -i " +
                           (workspace() / "nonarith.jsonl").string() + " -o " + out3.string());
    CHECK_EQ(r3.exit_code, 0);
    CHECK(r3.output.find("eligible: 0") != std::string::npos);
    CHECK(slurp(out3 / "eligibility.csv").find("non-arithmetic") != std::string::npos);
}

TEST_CASE("cli: dedup emits rows and readable pairs") {
    write_file("small.jsonl", kSmallCorpus);
    const fs::path out = workspace() / "dedup_out";
    RunResult r = run_cli("dedup -i " + (workspace() / "small.jsonl").string() +
                          " --threshold 0.5 -o " + out.string());
    CHECK_EQ(r.exit_code, 0);
    const std::string csv = slurp(out / "dedup.csv");
    CHECK(csv.find("p1,0,p2") != std::string::npos);
    CHECK(csv.find("p3") == std::string::npos);  // diverse problem not flagged
    const std::string pairs = slurp(out / "pairs.txt");
    CHECK(pairs.find("nearest text:") != std::string::npos);
}

TEST_CASE("cli: normalize dumps tokens, honors sidecars, rejects empty bodies") {
    write_file("small.jsonl", kSmallCorpus);
    const fs::path out = workspace() / "norm_out";
    RunResult r = run_cli("normalize -i " + (workspace() / "small.jsonl").string() + " -o " +
                          out.string());
    CHECK_EQ(r.exit_code, 0);
    const std::string dump = slurp(out / "normalized.jsonl");
    CHECK(dump.find("[NUM1]") != std::string::npos);
    CHECK(dump.find("[NUM2]") != std::string::npos);

    write_file("sidecar.jsonl",
               R"({"id":"p1","tokens":["Override","7"],"pos":["NNP","CD"],"lemmas":["override","7"]})"
               "\n");
    const fs::path out2 = workspace() / "norm_side_out";
    RunResult r2 = run_cli("normalize -i " + (workspace() / "small.jsonl").string() +
                           " --sidecar " + (workspace() / "sidecar.jsonl").string() + " -o " +
                           out2.string());
    CHECK_EQ(r2.exit_code, 0);
    const std::string dump2 = slurp(out2 / "normalized.jsonl");
    CHECK(dump2.find("override") != std::string::npos);

    write_file("emptybody.jsonl", R"({"id":"void-1","body":""})" "\n");
    RunResult r3 = run_cli("normalize -i " + (workspace() / "emptybody.jsonl").string() +
                           " -o " + (workspace() / "norm_err").string());
    CHECK_EQ(r3.exit_code, 2);
    CHECK(r3.output.find("void-1") != std::string::npos);
}

TEST_CASE("cli: convert produces loadable canonical output") {
    const char* asdiv = R"(<ProblemSet>
      <Problem ID="x-1" Grade="2" Source="s">
        <Body>Two birds sat on a wire.</Body>
        <Question>How many birds?</Question>
        <Solution-Type>Addition</Solution-Type>
        <Answer>2 (birds)</Answer>
        <Formula>1+1=2</Formula>
      </Problem>
    </ProblemSet>)";
    write_file("mini.xml", asdiv);
    const fs::path out = workspace() / "converted.jsonl";
    RunResult r = run_cli("convert -i " + (workspace() / "mini.xml").string() +
                          " --format asdiv -o " + out.string());
    CHECK_EQ(r.exit_code, 0);
    const std::string converted = slurp(out);
    CHECK(converted.find("\"id\":\"x-1\"") != std::string::npos);
    CHECK(converted.find("\"grade\":2") != std::string::npos);

    RunResult r2 = run_cli("diversity -i " + out.string() + " -o " +
                           (workspace() / "converted_div").string());
    CHECK_EQ(r2.exit_code, 0);
}
