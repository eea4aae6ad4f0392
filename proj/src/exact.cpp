#include "nblsat/exact.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace nblsat {

namespace {

// Signed-literal view of a clause for the enumeration loop; value lookup per
// assignment word avoids building a PartialAssignment for every completion.
struct FlatLiteral {
    int variable_slot;  // 0-based
    bool positive;
};

}  // namespace

ExactResult count_satisfying(const CnfFormula& f, const PartialAssignment& bindings) {
    if (bindings.variable_count() != f.variable_count())
        throw std::invalid_argument("binding length does not match the formula");

    const int n = f.variable_count();
    std::vector<int> unbound;
    for (int v = 1; v <= n; ++v)
        if (!bindings.is_bound(v))
            unbound.push_back(v);
    const int u = static_cast<int>(unbound.size());
    if (u > kMaxOracleUnbound)
        throw std::domain_error("enumeration guard: " + std::to_string(u) +
                                " unbound variables exceed the oracle limit of " +
                                std::to_string(kMaxOracleUnbound));

    // values[slot]: fixed part from bindings, mutable part from the mask.
    std::vector<std::uint8_t> values(static_cast<size_t>(n), 0);
    for (int v = 1; v <= n; ++v)
        if (bindings.is_bound(v))
            values[static_cast<size_t>(v - 1)] = bindings.value(v) ? 1 : 0;

    std::vector<std::vector<FlatLiteral>> clauses;
    clauses.reserve(f.clauses().size());
    for (const Clause& clause : f.clauses()) {
        std::vector<FlatLiteral> flat;
        flat.reserve(clause.size());
        for (const Literal& lit : clause)
            flat.push_back({lit.variable() - 1, lit.is_positive()});
        clauses.push_back(std::move(flat));
    }

    std::uint64_t count = 0;
    const std::uint64_t total = u >= 64 ? 0 : (UINT64_C(1) << u);
    for (std::uint64_t word = 0; word < total; ++word) {
        for (int k = 0; k < u; ++k)
            values[static_cast<size_t>(unbound[static_cast<size_t>(k)] - 1)] =
                static_cast<std::uint8_t>((word >> k) & 1);
        bool satisfied = true;
        for (const auto& clause : clauses) {
            bool clause_sat = false;
            for (const FlatLiteral& lit : clause) {
                if ((values[static_cast<size_t>(lit.variable_slot)] != 0) == lit.positive) {
                    clause_sat = true;
                    break;
                }
            }
            if (!clause_sat) {
                satisfied = false;
                break;
            }
        }
        count += satisfied;
    }

    ExactResult result;
    result.satisfying_count = count;
    result.satisfiable = count > 0;
    const double nm = static_cast<double>(n) * static_cast<double>(f.clause_count());
    result.analytic_mean = static_cast<double>(count) * std::pow(12.0, -nm);
    return result;
}

ExactResult count_satisfying(const CnfFormula& f) {
    return count_satisfying(f, PartialAssignment(f.variable_count()));
}

SnrEstimate snr(int n, int m, std::uint64_t samples, std::uint64_t k) {
    if (n < 1 || m < 1)
        throw std::invalid_argument("snr requires n >= 1 and m >= 1");
    if (samples < 2)
        throw std::invalid_argument("snr requires at least 2 samples");
    if (k < 1)
        throw std::invalid_argument("snr requires at least one satisfying minterm");

    const double nm = static_cast<double>(n) * static_cast<double>(m);
    const double sqrt_nm1 = std::sqrt(static_cast<double>(samples - 1));
    SnrEstimate est;
    est.variable_count = n;
    est.clause_count = m;
    est.sample_count = samples;
    est.satisfying_count = k;
    est.mu1 = static_cast<double>(k) * std::pow(12.0, -nm);
    est.sigma = std::pow(12.0, -nm) * std::exp2(nm) / sqrt_nm1;
    est.snr = static_cast<double>(k) * sqrt_nm1 / (3.0 * std::exp2(nm));
    return est;
}

std::optional<std::uint64_t> required_samples(int n, int m, std::uint64_t k, double target_snr,
                                              std::uint64_t cap) {
    if (target_snr <= 0.0)
        throw std::invalid_argument("target snr must be positive");
    if (n < 1 || m < 1)
        throw std::invalid_argument("required_samples needs n >= 1 and m >= 1");
    if (k < 1)
        throw std::invalid_argument("required_samples needs k >= 1");

    const double nm = static_cast<double>(n) * static_cast<double>(m);
    const double scale = 3.0 * std::exp2(nm) * target_snr / static_cast<double>(k);
    const double estimate = 1.0 + scale * scale;
    if (!(estimate < 9.0e18))  // beyond safe uint64 arithmetic: infeasible at any practical cap
        return std::nullopt;

    auto meets = [&](std::uint64_t samples) {
        return samples >= 2 && snr(n, m, samples, k).snr >= target_snr;
    };
    std::uint64_t candidate = std::max<std::uint64_t>(2, static_cast<std::uint64_t>(std::ceil(estimate)));
    while (!meets(candidate))
        ++candidate;  // float rounding slack; converges within a step or two
    while (candidate > 2 && meets(candidate - 1))
        --candidate;
    if (candidate > cap)
        return std::nullopt;
    return candidate;
}

}  // namespace nblsat
