#include "nblsat/noise.hpp"

#include <algorithm>
#include <cstdlib>
#include <future>
#include <optional>
#include <thread>

#include "nblsat/philox.hpp"

namespace nblsat {

namespace {

using detail::Philox4x32;
using detail::to_unit_interval;

// Counter layout: words 0-1 hold the sample index, word 2 the draw group
// (four draws per Philox call), word 3 the stream tag. The key is the
// master seed. Every draw is addressable without sequential state.
void fill_tape(SeedSpec seed, std::uint64_t t, TapeStream stream, std::span<double> out) {
    const Philox4x32::Key key = {static_cast<std::uint32_t>(seed.master_seed),
                                 static_cast<std::uint32_t>(seed.master_seed >> 32)};
    const std::uint32_t t_lo = static_cast<std::uint32_t>(t);
    const std::uint32_t t_hi = static_cast<std::uint32_t>(t >> 32);
    const size_t size = out.size();
    for (size_t group = 0; group * 4 < size; ++group) {
        const Philox4x32::Counter ctr = {t_lo, t_hi, static_cast<std::uint32_t>(group),
                                         static_cast<std::uint32_t>(stream)};
        const auto words = Philox4x32::generate(ctr, key);
        const size_t base = group * 4;
        const size_t limit = std::min<size_t>(4, size - base);
        for (size_t r = 0; r < limit; ++r)
            out[base + r] = to_unit_interval(words[r]);
    }
}

void check_counter_domain(int n, int m) {
    const std::uint64_t draws = 2ull * static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(m);
    if ((draws + 3) / 4 > 0xFFFFFFFFull)
        throw std::overflow_error("2*n*m draws exceed the counter domain");
}

// Per-clause falsifier roles: 0 = variable free in the clause, 1 = clause
// holds the positive literal (falsifying cube takes the negative draw),
// 2 = negative literal. Both polarities make the clause tautological.
struct ClauseShape {
    bool empty = false;
    bool tautological = false;
    std::vector<std::uint8_t> role;
};

struct InstanceShape {
    int n = 0;
    int m = 0;
    std::vector<ClauseShape> clauses;
};

InstanceShape build_shape(const CnfFormula& f) {
    InstanceShape shape;
    shape.n = f.variable_count();
    shape.m = f.clause_count();
    shape.clauses.reserve(f.clauses().size());
    for (const Clause& clause : f.clauses()) {
        ClauseShape cs;
        cs.role.assign(static_cast<size_t>(shape.n), 0);
        cs.empty = clause.empty();
        for (const Literal& lit : clause) {
            const std::uint8_t want = lit.is_positive() ? 1 : 2;
            std::uint8_t& role = cs.role[static_cast<size_t>(lit.variable() - 1)];
            if (role == 0)
                role = want;
            else if (role != want)
                cs.tautological = true;
        }
        shape.clauses.push_back(std::move(cs));
    }
    return shape;
}

struct BindingMask {
    std::vector<std::uint8_t> allow_pos;
    std::vector<std::uint8_t> allow_neg;
};

BindingMask build_mask(const PartialAssignment& a) {
    const int n = a.variable_count();
    BindingMask mask;
    mask.allow_pos.assign(static_cast<size_t>(n), 1);
    mask.allow_neg.assign(static_cast<size_t>(n), 1);
    for (int v = 1; v <= n; ++v) {
        if (a.is_bound(v)) {
            if (a.value(v))
                mask.allow_neg[static_cast<size_t>(v - 1)] = 0;
            else
                mask.allow_pos[static_cast<size_t>(v - 1)] = 0;
        }
    }
    return mask;
}

double tau_on(std::span<const double> draws, int n, int m, const BindingMask& mask,
              std::span<double> p, std::span<double> q) {
    for (int i = 0; i < n; ++i) {
        p[static_cast<size_t>(i)] = mask.allow_pos[static_cast<size_t>(i)] ? 1.0 : 0.0;
        q[static_cast<size_t>(i)] = mask.allow_neg[static_cast<size_t>(i)] ? 1.0 : 0.0;
    }
    for (int j = 0; j < m; ++j) {
        const double* row = draws.data() + static_cast<size_t>(j) * static_cast<size_t>(n) * 2;
        for (int i = 0; i < n; ++i) {
            p[static_cast<size_t>(i)] *= row[2 * i];
            q[static_cast<size_t>(i)] *= row[2 * i + 1];
        }
    }
    double product = 1.0;
    for (int i = 0; i < n; ++i)
        product *= p[static_cast<size_t>(i)] + q[static_cast<size_t>(i)];
    return product;
}

double sigma_on(std::span<const double> draws, const InstanceShape& shape) {
    double product = 1.0;
    const int n = shape.n;
    for (int j = 0; j < shape.m; ++j) {
        const ClauseShape& cs = shape.clauses[static_cast<size_t>(j)];
        if (cs.empty)
            return 0.0;
        const double* row = draws.data() + static_cast<size_t>(j) * static_cast<size_t>(n) * 2;
        double full = 1.0;
        if (cs.tautological) {
            for (int i = 0; i < n; ++i)
                full *= row[2 * i] + row[2 * i + 1];
            product *= full;
            continue;
        }
        double falsify = 1.0;
        for (int i = 0; i < n; ++i) {
            const double pos = row[2 * i];
            const double neg = row[2 * i + 1];
            full *= pos + neg;
            const std::uint8_t role = cs.role[static_cast<size_t>(i)];
            falsify *= role == 0 ? pos + neg : (role == 1 ? neg : pos);
        }
        product *= full - falsify;
    }
    return product;
}

struct SampleKernel {
    const InstanceShape* shape;
    const BindingMask* mask;
    SeedSpec seed;
    bool shared_tape;

    CorrelationEstimate run(std::uint64_t begin, std::uint64_t end) const {
        CorrelationEstimate est;
        const size_t draws = 2ull * static_cast<size_t>(shape->n) * static_cast<size_t>(shape->m);
        std::vector<double> tape(draws);
        std::vector<double> sigma_tape(shared_tape ? 0 : draws);
        std::vector<double> p(static_cast<size_t>(shape->n));
        std::vector<double> q(static_cast<size_t>(shape->n));
        for (std::uint64_t t = begin; t < end; ++t) {
            double tau, sigma;
            if (shared_tape) {
                fill_tape(seed, t, TapeStream::shared, tape);
                tau = tau_on(tape, shape->n, shape->m, *mask, p, q);
                sigma = sigma_on(tape, *shape);
            } else {
                fill_tape(seed, t, TapeStream::tau_only, tape);
                fill_tape(seed, t, TapeStream::sigma_only, sigma_tape);
                tau = tau_on(tape, shape->n, shape->m, *mask, p, q);
                sigma = sigma_on(sigma_tape, *shape);
            }
            est = accumulate(est, tau * sigma);
        }
        return est;
    }
};

// Segment ends are the block boundaries plus the emission points; both the
// convergence rule and emissions are evaluated only at these deterministic
// cuts, which keeps results independent of the thread count.
struct SegmentGenerator {
    const StoppingRule& stop;
    const std::vector<std::uint64_t>& emission;
    size_t eidx = 0;
    std::uint64_t cursor = 0;

    std::optional<std::pair<std::uint64_t, std::uint64_t>> next() {
        if (cursor >= stop.max_samples)
            return std::nullopt;
        std::uint64_t boundary = (cursor / stop.block_size + 1) * stop.block_size;
        if (boundary < cursor)  // wrapped
            boundary = stop.max_samples;
        boundary = std::min(boundary, stop.max_samples);
        while (eidx < emission.size() && emission[eidx] <= cursor)
            ++eidx;
        if (eidx < emission.size() && emission[eidx] < boundary)
            boundary = emission[eidx];
        const auto segment = std::make_pair(cursor, boundary);
        cursor = boundary;
        return segment;
    }
};

CorrelationEstimate drive(const CnfFormula& f, const PartialAssignment& bindings, SeedSpec seed,
                          const StoppingRule& stop, std::vector<std::uint64_t> emission,
                          const TraceSink& sink, bool shared_tape, unsigned threads) {
    if (stop.max_samples == 0)
        throw std::invalid_argument("max_samples must be positive");
    if (stop.block_size == 0)
        throw std::invalid_argument("block_size must be positive");
    if (bindings.variable_count() != f.variable_count())
        throw std::invalid_argument("binding length does not match the formula");
    check_counter_domain(f.variable_count(), f.clause_count());

    std::sort(emission.begin(), emission.end());
    emission.erase(std::unique(emission.begin(), emission.end()), emission.end());
    while (!emission.empty() && emission.front() == 0)
        emission.erase(emission.begin());
    while (!emission.empty() && emission.back() > stop.max_samples)
        emission.pop_back();
    if (sink && (emission.empty() || emission.back() != stop.max_samples))
        emission.push_back(stop.max_samples);

    const InstanceShape shape = build_shape(f);
    const BindingMask mask = build_mask(bindings);
    const SampleKernel kernel{&shape, &mask, seed, shared_tape};

    unsigned workers = threads != 0 ? threads : std::thread::hardware_concurrency();
    workers = std::max(1u, workers);

    const std::uint64_t floor = std::max<std::uint64_t>(stop.min_samples, 2);
    const double digits_tol =
        stop.convergence_digits > 0 ? std::pow(10.0, -stop.convergence_digits) : 0.0;

    CorrelationEstimate running;
    double prev_block_mean = 0.0;
    bool have_prev = false;
    size_t emit_idx = 0;
    std::uint64_t last_emitted = 0;
    bool stopped = false;

    SegmentGenerator gen{stop, emission};
    std::vector<std::pair<std::uint64_t, std::uint64_t>> segments;
    std::vector<CorrelationEstimate> results;
    while (!stopped) {
        segments.clear();
        for (unsigned w = 0; w < workers; ++w) {
            auto segment = gen.next();
            if (!segment)
                break;
            segments.push_back(*segment);
        }
        if (segments.empty())
            break;

        results.assign(segments.size(), CorrelationEstimate{});
        if (segments.size() == 1) {
            results[0] = kernel.run(segments[0].first, segments[0].second);
        } else {
            std::vector<std::future<CorrelationEstimate>> futures;
            futures.reserve(segments.size());
            for (const auto& [begin, end] : segments)
                futures.push_back(std::async(std::launch::async,
                                             [&kernel, begin = begin, end = end] {
                                                 return kernel.run(begin, end);
                                             }));
            for (size_t k = 0; k < futures.size(); ++k)
                results[k] = futures[k].get();
        }

        for (size_t k = 0; k < segments.size() && !stopped; ++k) {
            running = merge(running, results[k]);
            const std::uint64_t s = segments[k].second;

            while (emit_idx < emission.size() && emission[emit_idx] <= s) {
                if (sink && emission[emit_idx] == s) {
                    sink(TraceRecord{s, running.mean, running.std_error()});
                    last_emitted = s;
                }
                ++emit_idx;
            }

            if (s % stop.block_size == 0 && s < stop.max_samples) {
                if (running.sample_count >= floor) {
                    if (stop.zero_band > 0.0) {
                        const double se = running.std_error();
                        if (std::isfinite(se) && std::abs(running.mean) <= stop.zero_band * se)
                            stopped = true;
                    }
                    if (!stopped && digits_tol > 0.0 && have_prev &&
                        std::abs(running.mean - prev_block_mean) <=
                            digits_tol * std::abs(running.mean))
                        stopped = true;
                }
                prev_block_mean = running.mean;
                have_prev = true;
            }
        }
    }
    // an early stop still reports its endpoint, so the last record always
    // matches the returned estimate
    if (sink && last_emitted != running.sample_count)
        sink(TraceRecord{running.sample_count, running.mean, running.std_error()});
    return running;
}

}  // namespace

NoiseTape draw_tape(SeedSpec seed, std::uint64_t sample_index, int variable_count,
                    int clause_count, TapeStream stream) {
    if (variable_count < 0 || clause_count < 0)
        throw std::invalid_argument("negative tape dimensions");
    check_counter_domain(variable_count, clause_count);
    NoiseTape tape(variable_count, clause_count);
    fill_tape(seed, sample_index, stream, tape.draws());
    return tape;
}

double eval_tau(const NoiseTape& tape, const PartialAssignment& bindings) {
    if (bindings.variable_count() != tape.variable_count())
        throw std::invalid_argument("binding length does not match the tape");
    const BindingMask mask = build_mask(bindings);
    std::vector<double> p(static_cast<size_t>(tape.variable_count()));
    std::vector<double> q(static_cast<size_t>(tape.variable_count()));
    return tau_on(tape.draws(), tape.variable_count(), tape.clause_count(), mask, p, q);
}

double eval_sigma(const NoiseTape& tape, const CnfFormula& f) {
    if (f.variable_count() != tape.variable_count() || f.clause_count() != tape.clause_count())
        throw std::invalid_argument("formula dimensions do not match the tape");
    return sigma_on(tape.draws(), build_shape(f));
}

double sample_sn(SeedSpec seed, std::uint64_t sample_index, const CnfFormula& f,
                 const PartialAssignment& bindings) {
    const NoiseTape tape =
        draw_tape(seed, sample_index, f.variable_count(), f.clause_count(), TapeStream::shared);
    return eval_tau(tape, bindings) * eval_sigma(tape, f);
}

CorrelationEstimate accumulate(CorrelationEstimate est, double value) {
    est.sample_count += 1;
    const double delta = value - est.mean;
    est.mean += delta / static_cast<double>(est.sample_count);
    est.m2 += delta * (value - est.mean);
    return est;
}

CorrelationEstimate merge(const CorrelationEstimate& a, const CorrelationEstimate& b) {
    if (a.sample_count == 0)
        return b;
    if (b.sample_count == 0)
        return a;
    const double na = static_cast<double>(a.sample_count);
    const double nb = static_cast<double>(b.sample_count);
    const double n = na + nb;
    const double delta = b.mean - a.mean;
    CorrelationEstimate out;
    out.sample_count = a.sample_count + b.sample_count;
    out.mean = a.mean + delta * (nb / n);
    out.m2 = a.m2 + b.m2 + delta * delta * (na * nb / n);
    return out;
}

CorrelationEstimate run_correlation(const CnfFormula& f, const PartialAssignment& bindings,
                                    SeedSpec seed, const StoppingRule& stop, bool shared_tape,
                                    unsigned threads) {
    return drive(f, bindings, seed, stop, {}, nullptr, shared_tape, threads);
}

CorrelationEstimate run_trace(const CnfFormula& f, const PartialAssignment& bindings,
                              SeedSpec seed, const StoppingRule& stop,
                              const std::vector<std::uint64_t>& emission_points,
                              const TraceSink& sink, bool shared_tape, unsigned threads) {
    return drive(f, bindings, seed, stop, emission_points, sink, shared_tape, threads);
}

std::vector<std::uint64_t> linear_checkpoints(std::uint64_t stride, std::uint64_t max_samples) {
    if (stride == 0)
        throw std::invalid_argument("stride must be positive");
    if (max_samples / stride > 10'000'000)
        throw std::invalid_argument("stride too fine for the requested sample count");
    std::vector<std::uint64_t> points;
    for (std::uint64_t s = stride; s < max_samples; s += stride)
        points.push_back(s);
    points.push_back(max_samples);
    return points;
}

std::vector<std::uint64_t> log_checkpoints(int points_per_decade, std::uint64_t max_samples) {
    if (points_per_decade < 1)
        throw std::invalid_argument("points per decade must be positive");
    std::vector<std::uint64_t> points;
    for (int k = 0;; ++k) {
        const double value = std::pow(10.0, static_cast<double>(k) / points_per_decade);
        if (!(value < static_cast<double>(max_samples)))
            break;
        const auto rounded = static_cast<std::uint64_t>(std::llround(value));
        if (rounded >= 1 && (points.empty() || rounded > points.back()))
            points.push_back(rounded);
    }
    if (points.empty() || points.back() != max_samples)
        points.push_back(max_samples);
    return points;
}

}  // namespace nblsat
