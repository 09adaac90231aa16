#include <catch2/catch.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "ratiolim/report.hpp"

namespace fs = std::filesystem;

namespace {

struct CommandResult {
    int exit_code = -1;
    std::string output; // stdout + stderr
};

CommandResult run_cli(const std::string& args) {
    const std::string cmd = std::string(RATIOLIM_CLI_PATH) + " " + args + " 2>&1";
    std::array<char, 4096> buf{};
    CommandResult res;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (fgets(buf.data(), buf.size(), pipe))
        res.output += buf.data();
    const int status = pclose(pipe);
    res.exit_code = WEXITSTATUS(status);
    return res;
}

fs::path write_temp(const std::string& name, const std::string& content) {
    fs::path p = fs::temp_directory_path() / name;
    std::ofstream f(p);
    f << content;
    return p;
}

} // namespace

TEST_CASE("cli analyze") {
    auto p = write_temp("ratiolim_const.json", R"({"signature": [2, -1], "initial": [1, 1]})");
    SECTION("text output, exit 0") {
        auto res = run_cli("analyze " + p.string());
        REQUIRE(res.exit_code == 0);
        REQUIRE(res.output.find("verdict: limit_exists") != std::string::npos);
        REQUIRE(res.output.find("dubeau condition: fails") != std::string::npos);
    }
    SECTION("structured output parses back") {
        auto res = run_cli("--format structured analyze " + p.string());
        REQUIRE(res.exit_code == 0);
        auto rep = ratiolim::report_from_json(nlohmann::json::parse(res.output));
        REQUIRE(rep.outcome == "limit_exists");
        REQUIRE(rep.limit_value.has_value());
    }
    SECTION("--precision flows through to the pipeline") {
        auto res = run_cli("--format structured --precision 320 analyze " + p.string());
        REQUIRE(res.exit_code == 0);
        auto rep = ratiolim::report_from_json(nlohmann::json::parse(res.output));
        REQUIRE(rep.diagnostics.precision_bits == 320);
    }
    SECTION("indeterminate exits 2") {
        auto z = write_temp("ratiolim_zero.json", R"({"signature": [1, 1], "initial": [0, 0]})");
        auto res = run_cli("analyze " + z.string());
        REQUIRE(res.exit_code == 2);
    }
    SECTION("bad input exits 1 with a parse diagnostic") {
        auto bad = write_temp("ratiolim_bad.json", R"({"signature": [1, 1] "initial"})");
        auto res = run_cli("analyze " + bad.string());
        REQUIRE(res.exit_code == 1);
        REQUIRE(res.output.find("error") != std::string::npos);
    }
    SECTION("validation failure exits 1") {
        auto bad = write_temp("ratiolim_bn0.json", R"({"signature": [1, 0], "initial": [0, 1]})");
        auto res = run_cli("analyze " + bad.string());
        REQUIRE(res.exit_code == 1);
    }
    SECTION("missing file exits 1") {
        auto res = run_cli("analyze /nonexistent/definitely_not_here.json");
        REQUIRE(res.exit_code == 1);
    }
}

TEST_CASE("cli verify") {
    SECTION("fibonacci: converged, agreement, exit 0") {
        auto p =
            write_temp("ratiolim_fib.json", R"({"signature": [1, 1], "initial": [0, 1]})");
        auto res = run_cli("verify " + p.string() + " --k-max 200 --tol 1e-12");
        REQUIRE(res.exit_code == 0);
        REQUIRE(res.output.find("empirical: converged") != std::string::npos);
        REQUIRE(res.output.find("agreement: yes") != std::string::npos);
    }
    SECTION("oscillating case agrees with NoLimit") {
        auto p =
            write_temp("ratiolim_osc.json", R"({"signature": [0, 1], "initial": [1, 2]})");
        auto res = run_cli("verify " + p.string());
        REQUIRE(res.exit_code == 0);
        REQUIRE(res.output.find("verdict: no_limit") != std::string::npos);
        REQUIRE(res.output.find("empirical: oscillating") != std::string::npos);
    }
    SECTION("per-instance file options are honored") {
        auto p = write_temp("ratiolim_opts.json",
                            R"({"signature": [1, 1], "initial": [0, 1], "k_max": 64})");
        auto res = run_cli("--format structured verify " + p.string());
        auto rep = ratiolim::report_from_json(nlohmann::json::parse(res.output));
        REQUIRE(rep.empirical->k_max == 64);
    }
    SECTION("explicit flags beat file options") {
        auto p = write_temp("ratiolim_opts2.json",
                            R"({"signature": [1, 1], "initial": [0, 1], "k_max": 64})");
        auto res = run_cli("--format structured verify " + p.string() + " --k-max 100");
        auto rep = ratiolim::report_from_json(nlohmann::json::parse(res.output));
        REQUIRE(rep.empirical->k_max == 100);
    }
    SECTION("k_max below the window requirement is an input error") {
        auto p =
            write_temp("ratiolim_short.json", R"({"signature": [1, 1], "initial": [0, 1]})");
        auto res = run_cli("verify " + p.string() + " --k-max 5");
        REQUIRE(res.exit_code == 1);
    }
    SECTION("a detected disagreement exits 3") {
        // tol = 10 makes the window test accept the oscillating ratios
        // 2, 1/2 as "converged"; the solver rightly says NoLimit, and
        // the mismatch must surface as the bug-signal exit code
        auto p =
            write_temp("ratiolim_loose.json", R"({"signature": [0, 1], "initial": [1, 2]})");
        auto res = run_cli("verify " + p.string() + " --tol 10");
        REQUIRE(res.exit_code == 3);
        REQUIRE(res.output.find("agreement: NO") != std::string::npos);
    }
}

TEST_CASE("cli batch") {
    const std::string catalog =
        R"({"signature": [2, -1], "initial": [1, 1]})" "\n"
        R"({"signature": [1, 1], "initial": [0, 1]})" "\n"
        "this line is not json\n"
        R"({"signature": [0, 1], "initial": [1, 2]})" "\n";
    auto p = write_temp("ratiolim_catalog.jsonl", catalog);

    SECTION("text summary with per-record error handling") {
        auto res = run_cli("batch " + p.string());
        REQUIRE(res.exit_code == 0); // no disagreements
        REQUIRE(res.output.find("limit_exists=2") != std::string::npos);
        REQUIRE(res.output.find("no_limit=1") != std::string::npos);
        REQUIRE(res.output.find("errors=1") != std::string::npos);
    }
    SECTION("structured output is one record per line plus a summary") {
        auto res = run_cli("--format structured batch " + p.string());
        REQUIRE(res.exit_code == 0);
        std::istringstream in(res.output);
        std::string line;
        std::vector<ratiolim::AnalysisReport> records;
        bool summary_seen = false;
        while (std::getline(in, line)) {
            if (line.empty() || line.rfind("error", 0) == 0)
                continue;
            auto j = nlohmann::json::parse(line);
            if (j.contains("summary")) {
                summary_seen = true;
                REQUIRE(j["summary"]["limit_exists"] == 2);
                REQUIRE(j["summary"]["no_limit"] == 1);
                REQUIRE(j["summary"]["disagreements"] == 0);
                REQUIRE(j["summary"]["errors"] == 1);
            } else {
                records.push_back(ratiolim::report_from_json(j));
            }
        }
        REQUIRE(records.size() == 3);
        REQUIRE(summary_seen);
        // records come back in catalog order regardless of concurrency
        REQUIRE(records[0].signature == std::vector<std::string>{"2", "-1"});
        REQUIRE(records[1].signature == std::vector<std::string>{"1", "1"});
        REQUIRE(records[2].signature == std::vector<std::string>{"0", "1"});
    }
    SECTION("a disagreement anywhere in the catalog exits 3") {
        auto d = write_temp("ratiolim_catalog_disagree.jsonl",
                            R"({"signature": [2, -1], "initial": [1, 1]})" "\n"
                            R"({"signature": [0, 1], "initial": [1, 2], "tol": 10})" "\n");
        auto res = run_cli("batch " + d.string());
        REQUIRE(res.exit_code == 3);
        REQUIRE(res.output.find("disagreements=1") != std::string::npos);
    }
    SECTION("empty catalog") {
        auto e = write_temp("ratiolim_empty.jsonl", "");
        auto res = run_cli("batch " + e.string());
        REQUIRE(res.exit_code == 0);
        REQUIRE(res.output.find("limit_exists=0") != std::string::npos);
    }
    SECTION("--out writes the report to a file") {
        fs::path outp = fs::temp_directory_path() / "ratiolim_batch_out.jsonl";
        std::error_code ec;
        fs::remove(outp, ec);
        auto res = run_cli("--format structured --out " + outp.string() + " batch " + p.string());
        REQUIRE(res.exit_code == 0);
        REQUIRE(fs::exists(outp));
        std::ifstream f(outp);
        std::string first;
        std::getline(f, first);
        REQUIRE_FALSE(first.empty());
        REQUIRE(nlohmann::json::parse(first).is_object());
    }
    SECTION("global flags are accepted after the subcommand too") {
        fs::path outp = fs::temp_directory_path() / "ratiolim_trailing_out.jsonl";
        std::error_code ec;
        fs::remove(outp, ec);
        auto res =
            run_cli("batch " + p.string() + " --format structured --out " + outp.string());
        REQUIRE(res.exit_code == 0);
        REQUIRE(fs::exists(outp));
    }
}
