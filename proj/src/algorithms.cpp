#include "nblsat/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace nblsat {

namespace {

double z_score_of(const CorrelationEstimate& est) {
    const double se = est.std_error();
    if (std::isfinite(se) && se > 0.0)
        return est.mean / se;
    // Degenerate spread: a constant stream is certain evidence either way.
    if (est.mean > 0.0)
        return std::numeric_limits<double>::infinity();
    if (est.mean < 0.0)
        return -std::numeric_limits<double>::infinity();
    return 0.0;
}

CheckVerdict stochastic_check(const CnfFormula& f, const PartialAssignment& bindings,
                              const CheckConfig& config) {
    const int n = f.variable_count();
    const int m = f.clause_count();

    bool feasible = true;
    std::uint64_t budget = config.stop.min_samples;
    if (n >= 1 && m >= 1) {
        const auto required = required_samples(n, m, 1, config.snr_target, config.stop.max_samples);
        feasible = required.has_value();
        budget = feasible ? std::max(*required, config.stop.min_samples) : config.stop.max_samples;
    }
    budget = std::max<std::uint64_t>(2, std::min(budget, config.stop.max_samples));

    StoppingRule rule = config.stop;
    rule.max_samples = budget;
    // Keep the early-stop rules out of the regime where a single satisfying
    // minterm is still statistically invisible.
    rule.min_samples = std::max(config.stop.min_samples, budget / 4);

    CheckVerdict verdict;
    verdict.backend = Backend::stochastic;
    const CorrelationEstimate est =
        run_correlation(f, bindings, config.seed, rule, true, config.threads);
    verdict.estimate = est;
    verdict.z_score = z_score_of(est);
    verdict.sample_budget = budget;
    verdict.budget_feasible = feasible;

    if (verdict.z_score > config.z_threshold && est.mean > 0.0)
        verdict.verdict = Verdict::satisfiable;
    else if (feasible)
        verdict.verdict = Verdict::unsatisfiable;
    else
        verdict.verdict = Verdict::inconclusive;
    return verdict;
}

bool round_satisfiable(const CnfFormula& f, const PartialAssignment& bindings,
                       const CheckConfig& config) {
    const CheckVerdict v = check(f, bindings, config);
    if (v.verdict == Verdict::inconclusive)
        throw InconclusiveError("sample budget cannot reach the requested confidence");
    return v.satisfiable();
}

std::vector<int> resolve_order(const CnfFormula& f, const SolveOptions& options) {
    const int n = f.variable_count();
    if (options.variable_order.empty()) {
        std::vector<int> order(static_cast<size_t>(n));
        for (int v = 1; v <= n; ++v)
            order[static_cast<size_t>(v - 1)] = v;
        return order;
    }
    if (static_cast<int>(options.variable_order.size()) != n)
        throw std::invalid_argument("variable order must list every variable exactly once");
    std::vector<bool> seen(static_cast<size_t>(n) + 1, false);
    for (int v : options.variable_order) {
        if (v < 1 || v > n || seen[static_cast<size_t>(v)])
            throw std::invalid_argument("variable order must list every variable exactly once");
        seen[static_cast<size_t>(v)] = true;
    }
    return options.variable_order;
}

}  // namespace

CheckVerdict check(const CnfFormula& f, const PartialAssignment& bindings,
                   const CheckConfig& config) {
    if (bindings.variable_count() != f.variable_count())
        throw std::invalid_argument("binding length does not match the formula");
    if (config.backend == Backend::exact) {
        CheckVerdict verdict;
        verdict.backend = Backend::exact;
        const ExactResult exact = count_satisfying(f, bindings);
        verdict.estimate = exact;
        verdict.verdict = exact.satisfiable ? Verdict::satisfiable : Verdict::unsatisfiable;
        return verdict;
    }
    return stochastic_check(f, bindings, config);
}

CheckVerdict check(const CnfFormula& f, const CheckConfig& config) {
    return check(f, PartialAssignment(f.variable_count()), config);
}

SolveResult solve(const CnfFormula& f, const CheckConfig& config, const SolveOptions& options) {
    const auto order = resolve_order(f, options);
    SolveResult result{PartialAssignment(f.variable_count()), {}, 0};
    for (int variable : order) {
        PartialAssignment test = result.assignment;
        test.bind(variable, options.bind_true_first);
        const bool sat = round_satisfiable(f, test, config);
        ++result.check_invocations;
        result.per_round.push_back({variable, options.bind_true_first, sat});
        result.assignment.bind(variable, sat == options.bind_true_first);
    }
    if (evaluate(f, result.assignment) != Ternary::True) {
        if (config.backend == Backend::exact)
            throw InconsistencyError("instance is unsatisfiable; run check() first");
        throw InconsistencyError(
            "stochastic round verdicts are inconsistent with a satisfiable instance");
    }
    return result;
}

SolveResult solve_cube(const CnfFormula& f, const CheckConfig& config,
                       const SolveOptions& options) {
    const auto order = resolve_order(f, options);
    SolveResult result{PartialAssignment(f.variable_count()), {}, 0};
    for (int variable : order) {
        const bool first = options.bind_true_first;
        PartialAssignment test_first = result.assignment;
        test_first.bind(variable, first);
        PartialAssignment test_second = result.assignment;
        test_second.bind(variable, !first);

        const bool sat_first = round_satisfiable(f, test_first, config);
        ++result.check_invocations;
        result.per_round.push_back({variable, first, sat_first});
        const bool sat_second = round_satisfiable(f, test_second, config);
        ++result.check_invocations;
        result.per_round.push_back({variable, !first, sat_second});

        if (sat_first && sat_second)
            continue;  // both subspaces satisfiable: omit the variable
        if (!sat_first && !sat_second) {
            if (config.backend == Backend::exact)
                throw InconsistencyError("instance is unsatisfiable; run check() first");
            throw InconsistencyError(
                "both bindings of variable " + std::to_string(variable) +
                " reported unsatisfiable; stochastic verdicts are inconsistent");
        }
        result.assignment.bind(variable, sat_first ? first : !first);
    }
    return result;
}

BindingScore score_binding(const CnfFormula& f, const PartialAssignment& bindings, int variable,
                           bool value, const CheckConfig& config) {
    if (bindings.variable_count() != f.variable_count())
        throw std::invalid_argument("binding length does not match the formula");
    if (bindings.is_bound(variable))
        throw std::invalid_argument("variable " + std::to_string(variable) + " already bound");

    PartialAssignment extended = bindings;
    extended.bind(variable, value);

    BindingScore score;
    score.variable = variable;
    score.value = value;
    if (config.backend == Backend::exact) {
        const ExactResult exact = count_satisfying(f, extended);
        score.mean = exact.analytic_mean;
        score.std_error = 0.0;
        score.subspace_count = exact.satisfying_count;
        return score;
    }
    const CorrelationEstimate est =
        run_correlation(f, extended, config.seed, config.stop, true, config.threads);
    score.mean = est.mean;
    score.std_error = est.std_error();
    return score;
}

}  // namespace nblsat
