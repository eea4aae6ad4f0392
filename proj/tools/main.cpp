#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "nblsat/algorithms.hpp"
#include "nblsat/cnf.hpp"
#include "nblsat/exact.hpp"
#include "nblsat/noise.hpp"

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kExitSat = 10;
constexpr int kExitUnsat = 20;
constexpr int kExitInconclusive = 30;
constexpr int kExitError = 1;

struct Options {
    std::string backend = "stochastic";
    std::uint64_t seed = 1;
    std::uint64_t max_samples = 100'000'000;
    std::uint64_t block_size = 65'536;
    std::uint64_t min_samples = 65'536;
    double z_threshold = 5.0;
    int digits = 3;
    double snr_target = 5.0;
    std::string format = "text";
    unsigned threads = 0;
};

void add_common_options(CLI::App* cmd, Options& opt) {
    cmd->add_option("--backend", opt.backend, "Verdict backend")
        ->check(CLI::IsMember({"exact", "stochastic"}))
        ->envname("NBLSAT_BACKEND");
    cmd->add_option("--seed", opt.seed, "Master seed for the noise streams")
        ->envname("NBLSAT_SEED");
    cmd->add_option("--max-samples", opt.max_samples, "Sample cap")
        ->check(CLI::PositiveNumber)
        ->envname("NBLSAT_MAX_SAMPLES");
    cmd->add_option("--block-size", opt.block_size, "Samples per accumulation block")
        ->check(CLI::PositiveNumber)
        ->envname("NBLSAT_BLOCK_SIZE");
    cmd->add_option("--min-samples", opt.min_samples, "Floor before early stopping")
        ->check(CLI::PositiveNumber)
        ->envname("NBLSAT_MIN_SAMPLES");
    cmd->add_option("--z", opt.z_threshold, "z threshold for the satisfiable verdict")
        ->check(CLI::PositiveNumber)
        ->envname("NBLSAT_Z");
    cmd->add_option("--digits", opt.digits, "Significant digits for mean convergence")
        ->check(CLI::NonNegativeNumber)
        ->envname("NBLSAT_DIGITS");
    cmd->add_option("--snr-target", opt.snr_target, "Model SNR target sizing the sample budget")
        ->check(CLI::PositiveNumber)
        ->envname("NBLSAT_SNR_TARGET");
    cmd->add_option("--format", opt.format, "Report format")
        ->check(CLI::IsMember({"text", "json"}))
        ->envname("NBLSAT_FORMAT");
    cmd->add_option("--threads", opt.threads, "Worker threads (0 = auto)")
        ->envname("NBLSAT_THREADS");
}

nblsat::CheckConfig to_config(const Options& opt) {
    nblsat::CheckConfig config;
    config.backend =
        opt.backend == "exact" ? nblsat::Backend::exact : nblsat::Backend::stochastic;
    config.seed = nblsat::SeedSpec{opt.seed};
    config.stop.max_samples = opt.max_samples;
    config.stop.block_size = opt.block_size;
    config.stop.min_samples = opt.min_samples;
    config.stop.convergence_digits = opt.digits;
    config.z_threshold = opt.z_threshold;
    config.snr_target = opt.snr_target;
    config.threads = opt.threads;
    return config;
}

const char* verdict_name(nblsat::Verdict v) {
    switch (v) {
        case nblsat::Verdict::satisfiable: return "SATISFIABLE";
        case nblsat::Verdict::unsatisfiable: return "UNSATISFIABLE";
        case nblsat::Verdict::inconclusive: return "INCONCLUSIVE";
    }
    return "INCONCLUSIVE";
}

int verdict_exit(nblsat::Verdict v) {
    switch (v) {
        case nblsat::Verdict::satisfiable: return kExitSat;
        case nblsat::Verdict::unsatisfiable: return kExitUnsat;
        case nblsat::Verdict::inconclusive: return kExitInconclusive;
    }
    return kExitInconclusive;
}

struct Instance {
    nblsat::CnfFormula formula;
    nblsat::NormalizationReport report;
    bool clause_count_mismatch = false;
    std::string path;
};

Instance load_instance(const std::string& path) {
    const nblsat::ParseResult parsed = nblsat::parse_dimacs_file(path);
    auto [formula, report] = nblsat::normalize(parsed.formula);
    return Instance{std::move(formula), std::move(report), parsed.clause_count_mismatch, path};
}

void print_instance_comments(const Instance& inst) {
    std::printf("c instance %s\n", inst.path.c_str());
    std::printf("c n %d m %d\n", inst.formula.variable_count(), inst.formula.clause_count());
    if (inst.clause_count_mismatch)
        std::printf("c warning: clause count differs from the header\n");
    if (inst.report.removed_duplicate_literals > 0)
        std::printf("c normalize: removed %d duplicate literal(s)\n",
                    inst.report.removed_duplicate_literals);
    if (!inst.report.tautological_clauses.empty())
        std::printf("c normalize: %zu tautological clause(s)\n",
                    inst.report.tautological_clauses.size());
    if (inst.report.empty_clause_present)
        std::printf("c normalize: empty clause present (instance is unsatisfiable)\n");
}

ordered_json instance_json(const Instance& inst) {
    ordered_json j;
    j["instance"] = inst.path;
    j["n"] = inst.formula.variable_count();
    j["m"] = inst.formula.clause_count();
    j["clause_count_mismatch"] = inst.clause_count_mismatch;
    j["normalization"] = {
        {"removed_duplicate_literals", inst.report.removed_duplicate_literals},
        {"tautological_clauses", inst.report.tautological_clauses},
        {"empty_clause", inst.report.empty_clause_present},
    };
    return j;
}

void append_verdict_json(ordered_json& j, const nblsat::CheckVerdict& verdict,
                         const Options& opt) {
    j["backend"] = verdict.backend == nblsat::Backend::exact ? "exact" : "stochastic";
    j["verdict"] = verdict_name(verdict.verdict);
    if (verdict.backend == nblsat::Backend::exact) {
        const auto& exact = verdict.exact();
        j["k"] = exact.satisfying_count;
        j["analytic_mean"] = exact.analytic_mean;
    } else {
        const auto& est = verdict.stochastic();
        j["seed"] = opt.seed;
        j["samples"] = est.sample_count;
        j["mean"] = est.mean;
        j["stderr"] = est.std_error();
        j["z"] = verdict.z_score;
        j["budget"] = verdict.sample_budget;
        j["budget_feasible"] = verdict.budget_feasible;
    }
}

void print_verdict_comments(const nblsat::CheckVerdict& verdict, const Options& opt) {
    if (verdict.backend == nblsat::Backend::exact) {
        const auto& exact = verdict.exact();
        std::printf("c backend exact\n");
        std::printf("c K %" PRIu64 " analytic-mean %.12g\n", exact.satisfying_count,
                    exact.analytic_mean);
    } else {
        const auto& est = verdict.stochastic();
        std::printf("c backend stochastic seed %" PRIu64 "\n", opt.seed);
        std::printf("c budget %" PRIu64 " feasible %s\n", verdict.sample_budget,
                    verdict.budget_feasible ? "yes" : "no");
        std::printf("c samples %" PRIu64 " mean %.12g stderr %.12g z %.6g\n", est.sample_count,
                    est.mean, est.std_error(), verdict.z_score);
    }
}

int cmd_check(const std::string& path, const Options& opt) {
    const Instance inst = load_instance(path);
    const nblsat::CheckVerdict verdict = nblsat::check(inst.formula, to_config(opt));
    if (opt.format == "json") {
        ordered_json j = instance_json(inst);
        j["command"] = "check";
        append_verdict_json(j, verdict, opt);
        std::printf("%s\n", j.dump().c_str());
    } else {
        print_instance_comments(inst);
        print_verdict_comments(verdict, opt);
        std::printf("s %s\n", verdict_name(verdict.verdict));
    }
    return verdict_exit(verdict.verdict);
}

std::string solution_line(const nblsat::PartialAssignment& assignment) {
    std::string line = "v";
    for (int lit : assignment.to_dimacs()) {
        line += ' ';
        line += std::to_string(lit);
    }
    line += " 0";
    return line;
}

// A printed v-line must satisfy the instance. Minterm solutions are checked
// with evaluate() directly; cube solutions additionally admit the oracle
// check since a tautological clause leaves evaluate() undetermined.
bool verify_solution(const nblsat::CnfFormula& f, const nblsat::PartialAssignment& assignment,
                     bool cube_mode) {
    const nblsat::Ternary value = nblsat::evaluate(f, assignment);
    if (!cube_mode)
        return value == nblsat::Ternary::True;
    if (value == nblsat::Ternary::False)
        return false;
    if (assignment.unbound_count() <= nblsat::kMaxOracleUnbound)
        return nblsat::count_satisfying(f, assignment).satisfiable;
    return value == nblsat::Ternary::True;
}

int cmd_solve(const std::string& path, const Options& opt, const std::string& mode) {
    const Instance inst = load_instance(path);
    const nblsat::CheckConfig config = to_config(opt);
    const bool cube_mode = mode == "cube";

    const nblsat::CheckVerdict pre = nblsat::check(inst.formula, config);
    if (pre.verdict != nblsat::Verdict::satisfiable) {
        if (opt.format == "json") {
            ordered_json j = instance_json(inst);
            j["command"] = "solve";
            j["mode"] = mode;
            append_verdict_json(j, pre, opt);
            std::printf("%s\n", j.dump().c_str());
        } else {
            print_instance_comments(inst);
            print_verdict_comments(pre, opt);
            std::printf("s %s\n", verdict_name(pre.verdict));
        }
        return verdict_exit(pre.verdict);
    }

    nblsat::SolveResult result = [&] {
        try {
            return cube_mode ? nblsat::solve_cube(inst.formula, config)
                             : nblsat::solve(inst.formula, config);
        } catch (const nblsat::InconclusiveError&) {
            if (opt.format == "json") {
                ordered_json j = instance_json(inst);
                j["command"] = "solve";
                j["mode"] = mode;
                j["verdict"] = "INCONCLUSIVE";
                std::printf("%s\n", j.dump().c_str());
            } else {
                std::printf("s INCONCLUSIVE\n");
            }
            std::exit(kExitInconclusive);
        }
    }();
    if (!verify_solution(inst.formula, result.assignment, cube_mode))
        throw nblsat::InconsistencyError("solution failed self-verification");

    if (opt.format == "json") {
        ordered_json j = instance_json(inst);
        j["command"] = "solve";
        j["mode"] = mode;
        append_verdict_json(j, pre, opt);
        ordered_json rounds = ordered_json::array();
        for (const auto& round : result.per_round)
            rounds.push_back({{"variable", round.variable},
                              {"tested_value", round.tested_value},
                              {"satisfiable", round.satisfiable}});
        j["rounds"] = rounds;
        j["checks"] = result.check_invocations;
        j["assignment"] = result.assignment.to_dimacs();
        std::printf("%s\n", j.dump().c_str());
    } else {
        print_instance_comments(inst);
        print_verdict_comments(pre, opt);
        for (const auto& round : result.per_round)
            std::printf("c round: test %d -> %s\n",
                        round.tested_value ? round.variable : -round.variable,
                        round.satisfiable ? "SAT" : "UNSAT");
        std::printf("s SATISFIABLE\n");
        std::printf("%s\n", solution_line(result.assignment).c_str());
    }
    return kExitSat;
}

int cmd_oracle(const std::string& path, const Options& opt, const std::vector<int>& bind) {
    const Instance inst = load_instance(path);
    const nblsat::PartialAssignment bindings =
        nblsat::PartialAssignment::from_dimacs(inst.formula.variable_count(), bind);
    const nblsat::ExactResult result = nblsat::count_satisfying(inst.formula, bindings);
    if (opt.format == "json") {
        ordered_json j = instance_json(inst);
        j["command"] = "oracle";
        j["bind"] = bindings.to_dimacs();
        j["k"] = result.satisfying_count;
        j["analytic_mean"] = result.analytic_mean;
        j["satisfiable"] = result.satisfiable;
        std::printf("%s\n", j.dump().c_str());
    } else {
        print_instance_comments(inst);
        if (!bind.empty()) {
            std::string lits;
            for (int lit : bindings.to_dimacs())
                lits += ' ' + std::to_string(lit);
            std::printf("c bind%s\n", lits.c_str());
        }
        std::printf("c K %" PRIu64 "\n", result.satisfying_count);
        std::printf("c analytic-mean %.12g\n", result.analytic_mean);
        std::printf("s %s\n", result.satisfiable ? "SATISFIABLE" : "UNSATISFIABLE");
    }
    return result.satisfiable ? kExitSat : kExitUnsat;
}

int cmd_snr(const Options& opt, int n, int m, std::uint64_t samples, std::uint64_t k) {
    const nblsat::SnrEstimate est = nblsat::snr(n, m, samples, k);
    const auto required_1 = nblsat::required_samples(n, m, k, 1.0);
    const auto required_5 = nblsat::required_samples(n, m, k, 5.0);
    if (opt.format == "json") {
        ordered_json j;
        j["command"] = "snr";
        j["n"] = n;
        j["m"] = m;
        j["samples"] = samples;
        j["k"] = k;
        j["mu1"] = est.mu1;
        j["sigma_model"] = est.sigma;
        j["snr"] = est.snr;
        j["required_samples"] = {
            {"target_1", required_1 ? ordered_json(*required_1) : ordered_json(nullptr)},
            {"target_5", required_5 ? ordered_json(*required_5) : ordered_json(nullptr)},
        };
        std::printf("%s\n", j.dump().c_str());
    } else {
        std::printf("c model n %d m %d samples %" PRIu64 " k %" PRIu64 "\n", n, m, samples, k);
        std::printf("mu1 %.12g\n", est.mu1);
        std::printf("sigma %.12g\n", est.sigma);
        std::printf("snr %.12g\n", est.snr);
        if (required_1)
            std::printf("required-samples target 1: %" PRIu64 "\n", *required_1);
        else
            std::printf("required-samples target 1: infeasible\n");
        if (required_5)
            std::printf("required-samples target 5: %" PRIu64 "\n", *required_5);
        else
            std::printf("required-samples target 5: infeasible\n");
    }
    return 0;
}

int cmd_trace(const std::string& path, const Options& opt, std::uint64_t stride,
              int log_points_per_decade, const std::string& output) {
    const Instance inst = load_instance(path);

    // The trace always covers the full sample range; convergence stopping is
    // a verdict-side concern.
    nblsat::StoppingRule rule;
    rule.max_samples = opt.max_samples;
    rule.block_size = opt.block_size;
    rule.min_samples = opt.min_samples;
    rule.convergence_digits = 0;
    rule.zero_band = 0.0;

    std::vector<std::uint64_t> points;
    if (log_points_per_decade > 0)
        points = nblsat::log_checkpoints(log_points_per_decade, opt.max_samples);
    else if (stride > 0)
        points = nblsat::linear_checkpoints(stride, opt.max_samples);
    else
        points = nblsat::linear_checkpoints(std::max<std::uint64_t>(1, opt.max_samples / 100),
                                            opt.max_samples);

    std::FILE* out = stdout;
    if (!output.empty()) {
        out = std::fopen(output.c_str(), "w");
        if (out == nullptr) {
            std::fprintf(stderr, "error: cannot write '%s'\n", output.c_str());
            return kExitError;
        }
    }
    std::fprintf(out, "samples,mean,stderr\n");
    const nblsat::TraceSink sink = [out](const nblsat::TraceRecord& record) {
        std::fprintf(out, "%" PRIu64 ",%.17g,%.17g\n", record.sample_count, record.mean,
                     record.std_error);
    };
    nblsat::run_trace(inst.formula, nblsat::PartialAssignment(inst.formula.variable_count()),
                      nblsat::SeedSpec{opt.seed}, rule, points, sink, true, opt.threads);
    if (out != stdout)
        std::fclose(out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Noise-superposition SAT simulator"};
    app.require_subcommand(1);

    Options opt;
    std::string path;
    std::string mode = "minterm";
    std::vector<int> bind;
    int snr_n = 0;
    int snr_m = 0;
    std::uint64_t snr_samples = 100'000'000;
    std::uint64_t snr_k = 1;
    std::uint64_t stride = 0;
    int log_points = 0;
    std::string output;

    CLI::App* check_cmd = app.add_subcommand("check", "Decide satisfiability from the S_N mean");
    check_cmd->add_option("instance", path, "DIMACS CNF file")->required();
    add_common_options(check_cmd, opt);

    CLI::App* solve_cmd = app.add_subcommand("solve", "Extract a satisfying assignment or cube");
    solve_cmd->add_option("instance", path, "DIMACS CNF file")->required();
    solve_cmd->add_option("--mode", mode, "minterm binds every variable; cube may omit variables")
        ->check(CLI::IsMember({"minterm", "cube"}))
        ->envname("NBLSAT_MODE");
    add_common_options(solve_cmd, opt);

    CLI::App* oracle_cmd =
        app.add_subcommand("oracle", "Exact satisfying-minterm count and analytic mean");
    oracle_cmd->add_option("instance", path, "DIMACS CNF file")->required();
    oracle_cmd->add_option("--bind", bind, "Pre-bound signed literals");
    add_common_options(oracle_cmd, opt);

    CLI::App* snr_cmd = app.add_subcommand("snr", "Discriminability model for given dimensions");
    snr_cmd->add_option("-n,--vars", snr_n, "Variable count")->required();
    snr_cmd->add_option("-m,--clauses", snr_m, "Clause count")->required();
    snr_cmd->add_option("-N,--samples", snr_samples, "Sample count")->envname("NBLSAT_SAMPLES");
    snr_cmd->add_option("-k,--count", snr_k, "Satisfying minterm count");
    add_common_options(snr_cmd, opt);

    CLI::App* trace_cmd = app.add_subcommand("trace", "CSV of the running S_N mean and stderr");
    trace_cmd->add_option("instance", path, "DIMACS CNF file")->required();
    auto* stride_opt = trace_cmd->add_option("--stride", stride,
                                             "Emit a row every this many samples")
                           ->envname("NBLSAT_STRIDE");
    trace_cmd->add_option("--log-stride", log_points, "Log-spaced rows per decade")
        ->excludes(stride_opt)
        ->envname("NBLSAT_LOG_STRIDE");
    trace_cmd->add_option("--output", output, "Output CSV path (default stdout)")
        ->envname("NBLSAT_OUTPUT");
    add_common_options(trace_cmd, opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitError;
    }

    try {
        if (check_cmd->parsed())
            return cmd_check(path, opt);
        if (solve_cmd->parsed())
            return cmd_solve(path, opt, mode);
        if (oracle_cmd->parsed())
            return cmd_oracle(path, opt, bind);
        if (snr_cmd->parsed())
            return cmd_snr(opt, snr_n, snr_m, snr_samples, snr_k);
        if (trace_cmd->parsed())
            return cmd_trace(path, opt, stride, log_points, output);
    } catch (const nblsat::ParseError& e) {
        std::fprintf(stderr, "error: %s: %s\n", path.c_str(), e.what());
        return kExitError;
    } catch (const nblsat::InconclusiveError& e) {
        std::printf("s INCONCLUSIVE\n");
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInconclusive;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitError;
    }
    return kExitError;
}
