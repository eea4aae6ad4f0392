#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "nblsat/cnf.hpp"

namespace nblsat {

// Reproducibility contract: the draw for (master_seed, sample index t,
// clause j, variable i, polarity) is a pure function of those coordinates,
// independent of block partitioning and thread count.
struct SeedSpec {
    std::uint64_t master_seed = 0;
};

// Which counter plane the tape is drawn from. `shared` is the normal mode
// (tau and sigma read the same draws); the split planes exist for the
// decorrelation control, where tau and sigma must not share any source.
enum class TapeStream : std::uint32_t { shared = 0, tau_only = 1, sigma_only = 2 };

// One sample's 2*n*m draws, addressed by (clause j, variable i, polarity),
// all indices 1-based, each draw in [-0.5, 0.5].
class NoiseTape {
public:
    NoiseTape(int variable_count, int clause_count)
        : n_(variable_count),
          m_(clause_count),
          draws_(static_cast<size_t>(2) * static_cast<size_t>(variable_count) *
                 static_cast<size_t>(clause_count)) {}

    int variable_count() const { return n_; }
    int clause_count() const { return m_; }

    double at(int clause, int variable, bool positive) const {
        return draws_[index(clause, variable, positive)];
    }

    double& at(int clause, int variable, bool positive) {
        return draws_[index(clause, variable, positive)];
    }

    std::span<const double> draws() const { return draws_; }
    std::span<double> draws() { return draws_; }

private:
    size_t index(int clause, int variable, bool positive) const {
        return (static_cast<size_t>(clause - 1) * static_cast<size_t>(n_) +
                static_cast<size_t>(variable - 1)) *
                   2 +
               (positive ? 0 : 1);
    }

    int n_;
    int m_;
    std::vector<double> draws_;
};

NoiseTape draw_tape(SeedSpec seed, std::uint64_t sample_index, int variable_count,
                    int clause_count, TapeStream stream = TapeStream::shared);

// tau_N: product over variables of (P_i + Q_i), where P_i multiplies the
// positive draws of x_i across all clauses and Q_i the negative ones; a
// binding zeroes the complementary branch.
double eval_tau(const NoiseTape& tape, const PartialAssignment& bindings);

// Sigma_N: product over clauses of Z^j, where Z^j superposes every clause-j
// minterm satisfying the clause with coefficient one. Computed as the full
// clause-local hyperspace product minus the falsifying-cube product; a
// tautological clause keeps the full hyperspace, an empty clause yields 0.
double eval_sigma(const NoiseTape& tape, const CnfFormula& f);

// tau_N * Sigma_N on one shared tape. The shared draws are the correlation
// mechanism; see run_correlation's shared_tape flag for the negative control.
double sample_sn(SeedSpec seed, std::uint64_t sample_index, const CnfFormula& f,
                 const PartialAssignment& bindings);

// Streaming mean/variance (Welford). merge() is exact for the concatenated
// stream up to floating-point reordering.
struct CorrelationEstimate {
    std::uint64_t sample_count = 0;
    double mean = 0.0;
    double m2 = 0.0;  // sum of squared deviations

    double variance() const {
        return sample_count > 1 ? m2 / static_cast<double>(sample_count - 1) : 0.0;
    }

    double std_error() const {
        if (sample_count < 2)
            return std::numeric_limits<double>::infinity();
        return std::sqrt(m2 / (static_cast<double>(sample_count) *
                               static_cast<double>(sample_count - 1)));
    }
};

CorrelationEstimate accumulate(CorrelationEstimate est, double value);
CorrelationEstimate merge(const CorrelationEstimate& a, const CorrelationEstimate& b);

// Sampling halts at max_samples, or earlier once sample_count is at least
// min_samples and, at a block boundary, either the running mean changed by
// less than 10^-digits relative between consecutive blocks or it sits within
// zero_band * stderr of zero. digits = 0 and zero_band = 0 disable the
// respective rule.
struct StoppingRule {
    std::uint64_t max_samples = 100'000'000;
    std::uint64_t block_size = 65'536;
    std::uint64_t min_samples = 65'536;
    int convergence_digits = 3;
    double zero_band = 0.05;
};

struct TraceRecord {
    std::uint64_t sample_count = 0;
    double mean = 0.0;
    double std_error = 0.0;
};

using TraceSink = std::function<void(const TraceRecord&)>;

// Estimates E[S_N] by sampling t = 0, 1, 2, ... in blocks. The result is a
// pure function of (f, bindings, seed, stop): blocks are merged in index
// order, so any thread count yields bit-identical output. shared_tape=false
// draws independent tapes for tau and sigma (negative control).
CorrelationEstimate run_correlation(const CnfFormula& f, const PartialAssignment& bindings,
                                    SeedSpec seed, const StoppingRule& stop,
                                    bool shared_tape = true, unsigned threads = 0);

// Same loop, additionally reporting the running estimate at each emission
// point (ascending sample counts; the final sample count is always reported).
CorrelationEstimate run_trace(const CnfFormula& f, const PartialAssignment& bindings,
                              SeedSpec seed, const StoppingRule& stop,
                              const std::vector<std::uint64_t>& emission_points,
                              const TraceSink& sink, bool shared_tape = true,
                              unsigned threads = 0);

std::vector<std::uint64_t> linear_checkpoints(std::uint64_t stride, std::uint64_t max_samples);
std::vector<std::uint64_t> log_checkpoints(int points_per_decade, std::uint64_t max_samples);

}  // namespace nblsat
