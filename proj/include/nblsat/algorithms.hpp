#pragma once

#include <cstdint>
#include <stdexcept>
#include <variant>
#include <vector>

#include "nblsat/cnf.hpp"
#include "nblsat/exact.hpp"
#include "nblsat/noise.hpp"

namespace nblsat {

enum class Backend { exact, stochastic };
enum class Verdict { satisfiable, unsatisfiable, inconclusive };

// The stochastic sample budget could not reach the requested confidence.
class InconclusiveError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Stochastic round verdicts contradicted each other (or the precondition
// that the instance is satisfiable did not hold).
class InconsistencyError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CheckConfig {
    Backend backend = Backend::stochastic;
    SeedSpec seed{};
    StoppingRule stop{};
    double z_threshold = 5.0;
    double snr_target = 5.0;
    unsigned threads = 0;
};

struct CheckVerdict {
    Verdict verdict = Verdict::inconclusive;
    Backend backend = Backend::exact;
    std::variant<ExactResult, CorrelationEstimate> estimate;

    // Stochastic backend only.
    double z_score = 0.0;
    std::uint64_t sample_budget = 0;
    bool budget_feasible = true;

    bool satisfiable() const { return verdict == Verdict::satisfiable; }
    const ExactResult& exact() const { return std::get<ExactResult>(estimate); }
    const CorrelationEstimate& stochastic() const {
        return std::get<CorrelationEstimate>(estimate);
    }
};

// Single-operation satisfiability check. Exact backend: satisfiable iff the
// oracle count K > 0. Stochastic backend: runs the correlation estimator at
// a budget of max(required_samples(n, m, 1, snr_target), min_samples) capped
// at max_samples, then declares satisfiable iff mean/stderr > z_threshold
// with positive mean; a capped (infeasible) budget that fails the z test is
// inconclusive rather than unsatisfiable.
CheckVerdict check(const CnfFormula& f, const PartialAssignment& bindings,
                   const CheckConfig& config);
CheckVerdict check(const CnfFormula& f, const CheckConfig& config);

struct RoundRecord {
    int variable = 0;
    bool tested_value = false;
    bool satisfiable = false;
};

struct SolveOptions {
    bool bind_true_first = true;        // tested polarity in each round
    std::vector<int> variable_order{};  // empty: ascending 1..n
};

struct SolveResult {
    PartialAssignment assignment;
    std::vector<RoundRecord> per_round;
    int check_invocations = 0;
};

// Iterative binding: per variable, test the bind-to-1 reduction; on
// unsatisfiable keep the complement. Exactly n check invocations. Assumes a
// prior check() said satisfiable; a violated precondition surfaces as
// InconsistencyError after the final self-evaluation.
SolveResult solve(const CnfFormula& f, const CheckConfig& config, const SolveOptions& options = {});

// Cube variant: tests both bindings per variable and leaves the variable
// unbound when both reduced instances are satisfiable. The returned cube's
// subspace always contains a satisfying assignment (exact backend); a
// double failure in some round raises InconsistencyError.
SolveResult solve_cube(const CnfFormula& f, const CheckConfig& config,
                       const SolveOptions& options = {});

struct BindingScore {
    int variable = 0;
    bool value = false;
    double mean = 0.0;
    double std_error = 0.0;               // 0 on the exact backend
    std::uint64_t subspace_count = 0;     // exact backend only
};

// Mean S_N estimate with one extra binding applied; the branching guide for
// hybrid solvers (higher mean = more satisfying minterms in the subspace).
BindingScore score_binding(const CnfFormula& f, const PartialAssignment& bindings, int variable,
                           bool value, const CheckConfig& config);

}  // namespace nblsat
