#pragma once

#include <cstdint>
#include <optional>

#include "nblsat/cnf.hpp"

namespace nblsat {

// Enumeration guard: this module is an oracle, not a solver.
inline constexpr int kMaxOracleUnbound = 30;

struct ExactResult {
    std::uint64_t satisfying_count = 0;  // K
    double analytic_mean = 0.0;          // K * (1/12)^(n*m)
    bool satisfiable = false;
};

// Counts full assignments consistent with `bindings` that satisfy f, by
// brute-force enumeration of the unbound variables. Throws std::domain_error
// when more than kMaxOracleUnbound variables are unbound.
ExactResult count_satisfying(const CnfFormula& f, const PartialAssignment& bindings);

ExactResult count_satisfying(const CnfFormula& f);

// The discriminability model for an instance with K satisfying minterms:
//   mu1   = K * (1/12)^(nm)
//   sigma = (1/12)^(nm) * 2^(nm) / sqrt(N-1)     (model estimate)
//   snr   = K * sqrt(N-1) / (3 * 2^(nm))
// The sigma here treats the O(2^(nm)) cross products as independent even
// though they share sources; report it as a model estimate, with the
// empirical stderr from sampling as the measured alternative.
struct SnrEstimate {
    double mu1 = 0.0;
    double sigma = 0.0;
    double snr = 0.0;
    int variable_count = 0;
    int clause_count = 0;
    std::uint64_t sample_count = 0;
    std::uint64_t satisfying_count = 0;
};

SnrEstimate snr(int n, int m, std::uint64_t samples, std::uint64_t k);

// Smallest N with snr(n, m, N, k) >= target_snr, or nullopt when that N
// exceeds `cap` (infeasible at the configured budget).
std::optional<std::uint64_t> required_samples(int n, int m, std::uint64_t k, double target_snr,
                                              std::uint64_t cap = UINT64_C(1) << 62);

}  // namespace nblsat
