// Acceptance suite: runs every release criterion end to end and prints one
// pass/fail line each. The satisfiability ground truth used here is an
// independent truth-table walk, coded in this file and never the library's
// own counting; CLI-level criteria execute the binary named by NBLSAT_CLI_BIN.

#include <sys/wait.h>

#include <cinttypes>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "nblsat/algorithms.hpp"
#include "nblsat/cnf.hpp"
#include "nblsat/exact.hpp"
#include "nblsat/noise.hpp"

using namespace nblsat;

namespace {

int g_failures = 0;

void report(bool pass, const std::string& name, const std::string& detail) {
    std::printf("[%s] %s: %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    if (!pass)
        ++g_failures;
}

std::string format(const char* fmt, ...) {
    va_list args;
    va_start(args, fmt);
    char buffer[512];
    std::vsnprintf(buffer, sizeof buffer, fmt, args);
    va_end(args);
    return buffer;
}

// ---------------------------------------------------------------------------
// independent ground truth

CnfFormula make_formula(int n, const std::vector<std::vector<int>>& clause_ints) {
    std::vector<Clause> clauses;
    for (const auto& ints : clause_ints) {
        Clause clause;
        for (int lit : ints)
            clause.push_back(Literal(lit));
        clauses.push_back(std::move(clause));
    }
    return CnfFormula(n, std::move(clauses));
}

bool truth_table_satisfiable(const CnfFormula& f) {
    const int n = f.variable_count();
    for (std::uint64_t word = 0; word < (UINT64_C(1) << n); ++word) {
        bool all = true;
        for (const Clause& clause : f.clauses()) {
            bool sat = false;
            for (const Literal& lit : clause)
                if ((((word >> (lit.variable() - 1)) & 1) != 0) == lit.is_positive()) {
                    sat = true;
                    break;
                }
            if (!sat) {
                all = false;
                break;
            }
        }
        if (all)
            return true;
    }
    return false;
}

bool assignment_satisfies(const CnfFormula& f, const std::vector<int>& literals) {
    std::vector<int> value(static_cast<size_t>(f.variable_count()) + 1, 0);
    for (int lit : literals)
        value[static_cast<size_t>(std::abs(lit))] = lit > 0 ? 1 : -1;
    for (const Clause& clause : f.clauses()) {
        bool sat = false;
        for (const Literal& lit : clause) {
            const int v = value[static_cast<size_t>(lit.variable())];
            if (v != 0 && (v > 0) == lit.is_positive()) {
                sat = true;
                break;
            }
        }
        if (!sat)
            return false;
    }
    return true;
}

CnfFormula random_cnf(std::mt19937_64& rng, int n, int m, int max_width) {
    std::vector<std::vector<int>> clauses;
    for (int j = 0; j < m; ++j) {
        const int width =
            1 + static_cast<int>(rng() % static_cast<unsigned>(std::min(max_width, n)));
        std::vector<int> vars;
        while (static_cast<int>(vars.size()) < width) {
            const int v = 1 + static_cast<int>(rng() % static_cast<unsigned>(n));
            bool fresh = true;
            for (int seen : vars)
                fresh = fresh && seen != v;
            if (fresh)
                vars.push_back(v);
        }
        std::vector<int> clause;
        for (int v : vars)
            clause.push_back((rng() & 1) ? v : -v);
        clauses.push_back(std::move(clause));
    }
    return make_formula(n, clauses);
}

// ---------------------------------------------------------------------------
// CLI plumbing

struct CliResult {
    std::string output;
    int exit_code = -1;
};

std::string g_cli;
std::filesystem::path g_workdir;

CliResult run_cli(const std::string& args) {
    const std::string command = "'" + g_cli + "' " + args + " 2>/dev/null";
    CliResult result;
    std::FILE* pipe = popen(command.c_str(), "r");
    if (pipe == nullptr)
        return result;
    char buffer[4096];
    size_t got;
    while ((got = std::fread(buffer, 1, sizeof buffer, pipe)) > 0)
        result.output.append(buffer, got);
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::filesystem::path write_instance(const std::string& name, const std::string& body) {
    const auto path = g_workdir / name;
    std::ofstream out(path);
    out << body;
    return path;
}

struct CsvRow {
    std::uint64_t samples = 0;
    double mean = 0.0;
    double std_error = 0.0;
};

std::vector<CsvRow> parse_csv(const std::string& text) {
    std::vector<CsvRow> rows;
    size_t pos = text.find('\n');  // skip header
    while (pos != std::string::npos && pos + 1 < text.size()) {
        const size_t eol = text.find('\n', pos + 1);
        const std::string line = text.substr(pos + 1, eol - pos - 1);
        CsvRow row;
        if (std::sscanf(line.c_str(), "%" SCNu64 ",%lf,%lf", &row.samples, &row.mean,
                        &row.std_error) == 3)
            rows.push_back(row);
        pos = eol;
    }
    return rows;
}

const CsvRow* row_at(const std::vector<CsvRow>& rows, std::uint64_t samples) {
    for (const CsvRow& row : rows)
        if (row.samples == samples)
            return &row;
    return nullptr;
}

// ---------------------------------------------------------------------------
// fixed instances

const char* kSatInstance = "p cnf 2 4\n1 -2 0\n-1 -2 0\n1 -2 0\n-1 -2 0\n";
const char* kUnsatInstance = "p cnf 2 4\n1 2 0\n1 -2 0\n-1 2 0\n-1 -2 0\n";
const char* kTwoClauseInstance = "p cnf 2 2\n1 -2 0\n-1 -2 0\n";

CnfFormula two_clause_sat() { return make_formula(2, {{1, -2}, {-1, -2}}); }
CnfFormula forced_chain() { return make_formula(3, {{-1}, {2, 3}, {1, -3}, {-1, -2, 3}}); }

// ---------------------------------------------------------------------------
// criteria

std::vector<CsvRow> g_sat_rows;
std::vector<CsvRow> g_unsat_rows;

void criterion_trace_endpoints() {
    const double analytic = 2.0 * std::pow(12.0, -8.0);  // two solutions, nm = 8
    const auto sat_path = write_instance("paired_sat.cnf", kSatInstance);
    const auto unsat_path = write_instance("paired_unsat.cnf", kUnsatInstance);
    const std::string flags = " --seed 7 --max-samples 10000000 --stride 100000";

    const CliResult sat = run_cli("trace '" + sat_path.string() + "'" + flags);
    const CliResult unsat = run_cli("trace '" + unsat_path.string() + "'" + flags);
    g_sat_rows = parse_csv(sat.output);
    g_unsat_rows = parse_csv(unsat.output);

    bool pass = sat.exit_code == 0 && unsat.exit_code == 0 && g_sat_rows.size() == 100 &&
                g_unsat_rows.size() == 100;
    std::string detail;
    if (!pass) {
        detail = format("trace runs failed (exit %d/%d, rows %zu/%zu)", sat.exit_code,
                        unsat.exit_code, g_sat_rows.size(), g_unsat_rows.size());
    } else {
        const CsvRow& sat_final = g_sat_rows.back();
        const CsvRow& unsat_final = g_unsat_rows.back();
        const bool sat_ok = std::fabs(sat_final.mean - analytic) <= 4.0 * sat_final.std_error;
        const bool unsat_ok = std::fabs(unsat_final.mean) <= 4.0 * unsat_final.std_error;
        pass = sat_ok && unsat_ok && sat_final.samples == 10'000'000;
        detail = format("sat mean %.4g vs %.4g (|dz|=%.2f), unsat |mean|/stderr=%.2f",
                        sat_final.mean, analytic,
                        std::fabs(sat_final.mean - analytic) / sat_final.std_error,
                        std::fabs(unsat_final.mean) / unsat_final.std_error);
    }
    report(pass, "trace endpoints at 1e7 samples", detail);
}

void criterion_trace_shape() {
    bool pass = g_sat_rows.size() == 100 && g_unsat_rows.size() == 100;
    std::string detail = "trace rows missing";
    if (pass) {
        const CsvRow* checkpoints[2][3] = {
            {row_at(g_sat_rows, 100'000), row_at(g_sat_rows, 1'000'000),
             row_at(g_sat_rows, 10'000'000)},
            {row_at(g_unsat_rows, 100'000), row_at(g_unsat_rows, 1'000'000),
             row_at(g_unsat_rows, 10'000'000)},
        };
        double worst_ratio = 0.0;
        bool ratios_ok = true;
        bool monotone = true;
        for (auto& rows : checkpoints) {
            for (int k = 0; k < 3; ++k)
                pass = pass && rows[k] != nullptr;
            if (!pass)
                break;
            for (int k = 1; k < 3; ++k) {
                const double ratio = rows[k]->std_error / rows[k - 1]->std_error;
                ratios_ok = ratios_ok && ratio >= 0.25 && ratio <= 0.45;
                monotone = monotone && rows[k]->std_error < rows[k - 1]->std_error;
                worst_ratio = std::max(worst_ratio, std::fabs(ratio - std::sqrt(0.1)));
            }
        }
        const bool positive_plateau = pass && g_sat_rows.back().mean > 0.0;
        pass = pass && ratios_ok && monotone && positive_plateau;
        detail = format("stderr decade ratios within [0.25,0.45] (worst |r-0.316|=%.3f), "
                        "sat plateau %s",
                        worst_ratio, positive_plateau ? "positive" : "non-positive");
    }
    report(pass, "running-mean shape over decades", detail);
}

void criterion_oracle_equivalence() {
    CheckConfig config;
    config.backend = Backend::exact;

    // full clause pool over three variables, width 1..3
    std::vector<std::vector<int>> pool;
    for (int vars = 1; vars < 8; ++vars) {
        std::vector<int> members;
        for (int v = 1; v <= 3; ++v)
            if ((vars >> (v - 1)) & 1)
                members.push_back(v);
        const int w = static_cast<int>(members.size());
        for (int signs = 0; signs < (1 << w); ++signs) {
            std::vector<int> clause;
            for (int k = 0; k < w; ++k)
                clause.push_back(((signs >> k) & 1) ? members[k] : -members[k]);
            pool.push_back(std::move(clause));
        }
    }

    std::uint64_t tested = 0;
    std::uint64_t agreed = 0;
    auto run_one = [&](const CnfFormula& f) {
        ++tested;
        const bool exact = check(f, config).satisfiable();
        agreed += exact == truth_table_satisfiable(f);
    };

    run_one(make_formula(3, {}));
    for (size_t a = 0; a < pool.size(); ++a) {
        run_one(make_formula(3, {pool[a]}));
        for (size_t b = a; b < pool.size(); ++b) {
            run_one(make_formula(3, {pool[a], pool[b]}));
            for (size_t c = b; c < pool.size(); ++c)
                run_one(make_formula(3, {pool[a], pool[b], pool[c]}));
        }
    }

    std::mt19937_64 rng(20250809);
    for (int round = 0; round < 200; ++round)
        run_one(random_cnf(rng, 4, 5, 3));

    report(agreed == tested, "zero-average dichotomy equals brute force",
           format("%" PRIu64 "/%" PRIu64 " formulas agree", agreed, tested));
}

void criterion_stochastic_accuracy() {
    std::mt19937_64 rng(414243);
    const std::vector<std::pair<int, int>> pairs = {
        {1, 1}, {1, 2}, {1, 3}, {1, 4}, {1, 5}, {1, 6}, {1, 7}, {1, 8},
        {2, 1}, {2, 2}, {2, 3}, {2, 4}, {3, 1}, {3, 2}, {4, 1}, {4, 2},
        {5, 1}, {6, 1}, {7, 1}, {8, 1},
    };

    int matches = 0;
    int wrong = 0;
    int inconclusive = 0;
    const int total = 200;
    for (int round = 0; round < total; ++round) {
        const auto [n, m] = pairs[rng() % pairs.size()];
        const CnfFormula f = random_cnf(rng, n, m, 3);
        const bool truth = truth_table_satisfiable(f);

        CheckConfig config;
        config.backend = Backend::stochastic;
        config.seed = SeedSpec{1000 + static_cast<std::uint64_t>(round)};
        const CheckVerdict verdict = check(f, config);
        if (verdict.verdict == Verdict::inconclusive) {
            ++inconclusive;
        } else if (verdict.satisfiable() == truth) {
            ++matches;
        } else {
            ++wrong;
        }
    }
    const bool pass = matches >= 190 && wrong == 0;
    report(pass, "stochastic verdicts at snr-target-5 budgets",
           format("%d/%d match, %d inconclusive, %d confidently wrong", matches, total,
                  inconclusive, wrong));
}

void criterion_assignment_extraction() {
    CheckConfig config;
    config.backend = Backend::exact;

    const auto worked = solve(two_clause_sat(), config);
    const bool worked_ok = worked.assignment.to_dimacs() == std::vector<int>{1, -2};
    const auto chain = solve(forced_chain(), config);
    const bool chain_ok = chain.assignment.to_dimacs() == std::vector<int>{-1, 2, -3};

    std::mt19937_64 rng(515253);
    int solved = 0;
    int sound = 0;
    int exact_rounds = 0;
    while (solved < 500) {
        const int n = 2 + static_cast<int>(rng() % 5);
        const int m = 1 + static_cast<int>(rng() % 6);
        const CnfFormula f = random_cnf(rng, n, m, 3);
        if (!truth_table_satisfiable(f))
            continue;
        const auto result = solve(f, config);
        sound += assignment_satisfies(f, result.assignment.to_dimacs());
        exact_rounds += result.check_invocations == n;
        ++solved;
    }

    const bool pass = worked_ok && chain_ok && sound == 500 && exact_rounds == 500;
    report(pass, "iterative binding extraction",
           format("fixed instances %s, %d/500 satisfy, %d/500 use exactly n rounds",
                  worked_ok && chain_ok ? "exact" : "WRONG", sound, exact_rounds));
}

void criterion_analytic_mean() {
    StoppingRule full;
    full.convergence_digits = 0;
    full.zero_band = 0.0;

    full.max_samples = 1'000'000;
    const auto single =
        run_correlation(make_formula(1, {{1}}), PartialAssignment(1), SeedSpec{7}, full);
    const double dev_single = std::fabs(single.mean - 1.0 / 12.0) / single.std_error();

    full.max_samples = 10'000'000;
    const auto pair = run_correlation(two_clause_sat(), PartialAssignment(2), SeedSpec{7}, full);
    const double analytic = 2.0 * std::pow(12.0, -4.0);
    const double dev_pair = std::fabs(pair.mean - analytic) / pair.std_error();

    report(dev_single <= 4.0 && dev_pair <= 4.0, "analytic-mean convergence",
           format("single-literal |dz|=%.2f at 1e6, two-clause |dz|=%.2f at 1e7", dev_single,
                  dev_pair));
}

void criterion_snr_model() {
    const auto one = snr(2, 4, 100'000'000, 1);
    const auto two = snr(2, 4, 100'000'000, 2);
    const auto required = required_samples(2, 4, 1, 1.0);
    const bool snr_ok = std::fabs(one.snr - 13.02) <= 0.01;
    const bool doubling_ok = two.snr == 2.0 * one.snr;
    const bool required_ok = required.has_value() && *required == 589'825;  // 1 + 9*4^8
    report(snr_ok && doubling_ok && required_ok, "discriminability model",
           format("snr=%.4f, K doubling %s, required-at-target-1 %" PRIu64, one.snr,
                  doubling_ok ? "exact" : "WRONG", required ? *required : 0));
}

void criterion_determinism() {
    const auto path = write_instance("two_clause.cnf", kTwoClauseInstance);
    const std::string base = "check '" + path.string() + "' --format json --seed 99";
    const CliResult first = run_cli(base + " --threads 2");
    const CliResult second = run_cli(base + " --threads 2");
    const CliResult one_thread = run_cli(base + " --threads 1");
    const CliResult four_threads = run_cli(base + " --threads 4");

    const bool identical = first.output == second.output && first.exit_code == second.exit_code &&
                           !first.output.empty();

    auto mean_of = [](const std::string& json) {
        const size_t pos = json.find("\"mean\":");
        return pos == std::string::npos ? 0.0 : std::strtod(json.c_str() + pos + 7, nullptr);
    };
    const double mean_1 = mean_of(one_thread.output);
    const double mean_4 = mean_of(four_threads.output);
    const double rel =
        mean_1 == 0.0 ? std::fabs(mean_4) : std::fabs(mean_1 - mean_4) / std::fabs(mean_1);
    const bool threads_ok = rel <= 1e-12;

    report(identical && threads_ok, "byte-identical reruns and thread independence",
           format("rerun %s, thread-count mean drift %.3g", identical ? "identical" : "DIFFERS",
                  rel));
}

void criterion_negative_control() {
    StoppingRule full;
    full.max_samples = 10'000'000;
    full.convergence_digits = 0;
    full.zero_band = 0.0;
    const auto est = run_correlation(two_clause_sat(), PartialAssignment(2), SeedSpec{7}, full,
                                     /*shared_tape=*/false);
    const double ratio = std::fabs(est.mean) / est.std_error();
    report(ratio <= 4.0, "decorrelated tapes lose the signal",
           format("|mean|/stderr=%.2f at 1e7 on a satisfiable instance", ratio));
}

}  // namespace

int main() {
    const char* cli = std::getenv("NBLSAT_CLI_BIN");
    if (cli == nullptr || *cli == '\0') {
        std::fprintf(stderr, "NBLSAT_CLI_BIN must name the CLI binary\n");
        return 2;
    }
    g_cli = cli;

    std::string workdir_template =
        (std::filesystem::temp_directory_path() / "nblsat-accept-XXXXXX").string();
    if (mkdtemp(workdir_template.data()) == nullptr) {
        std::fprintf(stderr, "cannot create a scratch directory\n");
        return 2;
    }
    g_workdir = workdir_template;

    std::printf("acceptance run, cli=%s\n", g_cli.c_str());
    criterion_trace_endpoints();
    criterion_trace_shape();
    criterion_oracle_equivalence();
    criterion_stochastic_accuracy();
    criterion_assignment_extraction();
    criterion_analytic_mean();
    criterion_snr_model();
    criterion_determinism();
    criterion_negative_control();

    std::filesystem::remove_all(g_workdir);
    if (g_failures == 0) {
        std::printf("all criteria passed\n");
        return 0;
    }
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
}
