// ratiolim CLI: decide whether a linear-recurrence sequence has a ratio
// limit of consecutive terms, compute it, and cross-check the verdict
// against direct iteration.
//
// Exit codes: 0 decisive (limit exists / no limit), 1 input error,
// 2 indeterminate, 3 verdict/empirical disagreement.

#include <CLI11.hpp>

#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ratiolim/report.hpp"

namespace {

using namespace ratiolim;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitIndeterminate = 2;
constexpr int kExitDisagreement = 3;

struct OutputOptions {
    std::string format = "text"; // text | structured
    std::string out_path;        // empty -> stdout
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw InstanceError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const std::string& text, const OutputOptions& out) {
    if (out.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out.out_path);
    if (!f)
        throw InstanceError("cannot write '" + out.out_path + "'");
    f << text;
}

std::string format_report(const AnalysisReport& rep, const OutputOptions& out) {
    if (out.format == "structured")
        return to_json(rep).dump() + "\n";
    return render_text(rep);
}

int verdict_exit_code(const AnalysisReport& rep, bool consider_agreement) {
    if (consider_agreement && rep.agreement && !*rep.agreement)
        return kExitDisagreement;
    if (rep.outcome == "indeterminate")
        return kExitIndeterminate;
    return kExitOk;
}

struct ForcedFlags {
    bool precision = false;
    bool k_max = false;
    bool tol = false;
};

// Explicitly-given command-line flags beat per-instance file fields.
void strip_forced(InstanceSpec& spec, const ForcedFlags& forced) {
    if (forced.precision)
        spec.precision_bits.reset();
    if (forced.k_max)
        spec.k_max.reset();
    if (forced.tol)
        spec.tol.reset();
}

int run_single(const std::string& path, const AnalysisConfig& cfg, bool with_empirical,
               const OutputOptions& out, const ForcedFlags& forced) {
    AnalysisReport rep;
    try {
        InstanceSpec spec = parse_instance_text(slurp(path));
        strip_forced(spec, forced);
        rep = run_analysis(spec, cfg, with_empirical);
    } catch (const InstanceError& e) {
        std::cerr << "error: " << path << ": " << e.what() << "\n";
        return kExitInputError;
    } catch (const ZeroTrailingCoefficient& e) {
        std::cerr << "error: " << path << ": " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << path << ": " << e.what() << "\n";
        return kExitInputError;
    }
    emit(format_report(rep, out), out);
    return verdict_exit_code(rep, with_empirical);
}

struct BatchRecord {
    std::size_t line_no = 0;
    bool ok = false;
    std::string error;
    AnalysisReport report;
};

int run_batch(const std::string& path, const AnalysisConfig& cfg, const OutputOptions& out,
              const ForcedFlags& forced) {
    std::string text;
    try {
        text = slurp(path);
    } catch (const InstanceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }

    std::vector<std::pair<std::size_t, std::string>> lines;
    {
        std::istringstream in(text);
        std::string line;
        std::size_t no = 0;
        while (std::getline(in, line)) {
            ++no;
            if (line.find_first_not_of(" \t\r") == std::string::npos)
                continue;
            lines.emplace_back(no, line);
        }
    }

    const auto process = [&](const std::pair<std::size_t, std::string>& item) {
        BatchRecord rec;
        rec.line_no = item.first;
        try {
            InstanceSpec spec = parse_instance_text(item.second);
            strip_forced(spec, forced);
            rec.report = run_analysis(spec, cfg, /*with_empirical=*/true);
            rec.ok = true;
        } catch (const std::exception& e) {
            rec.error = e.what();
        }
        // release this worker thread's mpfr constant caches; they are
        // per-thread and would otherwise leak on every thread exit
        mpfr_free_cache();
        return rec;
    };

    // instances are independent; run a bounded number concurrently and
    // collect in input order
    const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
    std::vector<BatchRecord> records(lines.size());
    for (std::size_t base = 0; base < lines.size(); base += workers) {
        const std::size_t end = std::min(lines.size(), base + workers);
        std::vector<std::future<BatchRecord>> futs;
        for (std::size_t i = base; i < end; ++i)
            futs.push_back(std::async(std::launch::async, process, lines[i]));
        for (std::size_t i = base; i < end; ++i)
            records[i] = futs[i - base].get();
    }

    std::size_t n_limit = 0, n_nolimit = 0, n_indet = 0, n_disagree = 0, n_errors = 0;
    std::ostringstream body;
    for (const BatchRecord& rec : records) {
        if (!rec.ok) {
            ++n_errors;
            std::cerr << "error: " << path << ":" << rec.line_no << ": " << rec.error << "\n";
            continue;
        }
        const AnalysisReport& r = rec.report;
        if (r.outcome == "limit_exists")
            ++n_limit;
        else if (r.outcome == "no_limit")
            ++n_nolimit;
        else
            ++n_indet;
        if (r.agreement && !*r.agreement)
            ++n_disagree;

        if (out.format == "structured") {
            body << to_json(r).dump() << "\n";
        } else {
            body << "line " << rec.line_no << ": " << r.outcome;
            if (r.limit_value)
                body << "  limit = " << r.limit_value->display();
            if (r.empirical)
                body << "  empirical = " << r.empirical->status;
            body << "  agreement = "
                 << (r.agreement ? (*r.agreement ? "yes" : "NO") : "n/a") << "\n";
        }
    }

    if (out.format == "structured") {
        nlohmann::json summary{{"summary",
                                {{"limit_exists", n_limit},
                                 {"no_limit", n_nolimit},
                                 {"indeterminate", n_indet},
                                 {"disagreements", n_disagree},
                                 {"errors", n_errors}}}};
        body << summary.dump() << "\n";
    } else {
        body << "summary: limit_exists=" << n_limit << " no_limit=" << n_nolimit
             << " indeterminate=" << n_indet << " disagreements=" << n_disagree
             << " errors=" << n_errors << "\n";
    }
    try {
        emit(body.str(), out);
    } catch (const InstanceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return n_disagree > 0 ? kExitDisagreement : kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ratio-limit analysis of sequences generated by linear recurrences"};
    app.require_subcommand(1);

    OutputOptions out;
    long precision = 256;
    CLI::Option* precision_opt =
        app.add_option("--precision", precision, "working precision in bits (default 256)");
    app.add_option("--out", out.out_path, "write the report to this path instead of stdout");
    app.add_option("--format", out.format, "output format: text or structured (JSON lines)")
        ->check(CLI::IsMember({"text", "structured"}));

    std::string analyze_path, verify_path, batch_path;
    long k_max = 200;
    double tol = 1e-12;

    // let global flags (--out, --format, --precision) appear after the
    // subcommand too
    app.fallthrough();

    CLI::App* analyze_cmd =
        app.add_subcommand("analyze", "solver verdict for one instance file");
    analyze_cmd->add_option("file", analyze_path, "instance file (JSON)")->required();

    CLI::App* verify_cmd = app.add_subcommand(
        "verify", "solver verdict plus empirical iteration cross-check");
    verify_cmd->add_option("file", verify_path, "instance file (JSON)")->required();
    CLI::Option* kmax_opt =
        verify_cmd->add_option("--k-max", k_max, "iteration horizon (default 200)");
    CLI::Option* tol_opt =
        verify_cmd->add_option("--tol", tol, "ratio convergence tolerance (default 1e-12)");

    CLI::App* batch_cmd =
        app.add_subcommand("batch", "process a newline-delimited catalog of instances");
    batch_cmd->add_option("file", batch_path, "catalog file (one JSON record per line)")
        ->required();

    CLI11_PARSE(app, argc, argv);

    ratiolim::AnalysisConfig cfg;
    if (precision < ratiolim::kMinPrecision) {
        std::cerr << "error: --precision must be >= 53\n";
        return kExitInputError;
    }
    cfg.precision_bits = precision;
    cfg.precision_cap = std::max<long>(cfg.precision_cap, precision);

    ForcedFlags forced;
    forced.precision = precision_opt->count() > 0;
    forced.k_max = kmax_opt->count() > 0;
    forced.tol = tol_opt->count() > 0;
    if (forced.k_max)
        cfg.k_max = k_max;
    if (forced.tol) {
        if (!(tol > 0)) {
            std::cerr << "error: --tol must be positive\n";
            return kExitInputError;
        }
        cfg.tol = tol;
    }

    try {
        if (analyze_cmd->parsed())
            return run_single(analyze_path, cfg, /*with_empirical=*/false, out, forced);
        if (verify_cmd->parsed())
            return run_single(verify_path, cfg, /*with_empirical=*/true, out, forced);
        return run_batch(batch_path, cfg, out, forced);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}
