#pragma once

// Test-side helpers kept independent of the library code they cross-check:
// the truth-table walk below evaluates clauses on raw signed literals and
// never calls evaluate() or count_satisfying().

#include <cstdint>
#include <random>
#include <vector>

#include "nblsat/cnf.hpp"

namespace testutil {

inline nblsat::CnfFormula make_formula(int n, const std::vector<std::vector<int>>& clause_ints) {
    std::vector<nblsat::Clause> clauses;
    clauses.reserve(clause_ints.size());
    for (const auto& ints : clause_ints) {
        nblsat::Clause clause;
        for (int lit : ints)
            clause.push_back(nblsat::Literal(lit));
        clauses.push_back(std::move(clause));
    }
    return nblsat::CnfFormula(n, std::move(clauses));
}

inline std::uint64_t truth_table_count(const nblsat::CnfFormula& f) {
    const int n = f.variable_count();
    std::uint64_t count = 0;
    for (std::uint64_t word = 0; word < (UINT64_C(1) << n); ++word) {
        bool all_clauses = true;
        for (const nblsat::Clause& clause : f.clauses()) {
            bool clause_sat = false;
            for (const nblsat::Literal& lit : clause) {
                const bool value = ((word >> (lit.variable() - 1)) & 1) != 0;
                if (value == lit.is_positive()) {
                    clause_sat = true;
                    break;
                }
            }
            if (!clause_sat) {
                all_clauses = false;
                break;
            }
        }
        count += all_clauses;
    }
    return count;
}

inline bool truth_table_satisfiable(const nblsat::CnfFormula& f) {
    return truth_table_count(f) > 0;
}

// (x1 + !x2) (!x1 + !x2): satisfiable, solutions 10 and 00.
inline nblsat::CnfFormula two_clause_sat() {
    return make_formula(2, {{1, -2}, {-1, -2}});
}

// (x1)(!x1): the smallest conflict.
inline nblsat::CnfFormula unit_conflict() {
    return make_formula(1, {{1}, {-1}});
}

// (!x1)(x2 + x3)(x1 + !x3)(!x1 + !x2 + x3): unique solution 010.
inline nblsat::CnfFormula forced_chain() {
    return make_formula(3, {{-1}, {2, 3}, {1, -3}, {-1, -2, 3}});
}

// two_clause_sat with both clauses repeated (m = 4, same solutions).
inline nblsat::CnfFormula redundant_sat() {
    return make_formula(2, {{1, -2}, {-1, -2}, {1, -2}, {-1, -2}});
}

// all four width-2 clauses over two variables: unsatisfiable.
inline nblsat::CnfFormula complete_conflict() {
    return make_formula(2, {{1, 2}, {1, -2}, {-1, 2}, {-1, -2}});
}

inline nblsat::CnfFormula random_cnf(std::mt19937_64& rng, int n, int m, int min_width,
                                     int max_width) {
    std::vector<std::vector<int>> clauses;
    std::uniform_int_distribution<int> width_dist(min_width, std::min(max_width, n));
    std::uniform_int_distribution<int> var_dist(1, n);
    std::uniform_int_distribution<int> sign_dist(0, 1);
    for (int j = 0; j < m; ++j) {
        const int width = width_dist(rng);
        std::vector<int> vars;
        while (static_cast<int>(vars.size()) < width) {
            const int v = var_dist(rng);
            bool fresh = true;
            for (int seen : vars)
                fresh = fresh && seen != v;
            if (fresh)
                vars.push_back(v);
        }
        std::vector<int> clause;
        for (int v : vars)
            clause.push_back(sign_dist(rng) ? v : -v);
        clauses.push_back(std::move(clause));
    }
    return make_formula(n, clauses);
}

inline nblsat::CnfFormula random_3cnf(std::mt19937_64& rng, int n, int m) {
    return random_cnf(rng, n, m, 3, 3);
}

// every non-degenerate clause over variables 1..n with width 1..max_width
inline std::vector<std::vector<int>> clause_pool(int n, int max_width) {
    std::vector<std::vector<int>> pool;
    const int subsets = 1 << n;
    for (int vars = 1; vars < subsets; ++vars) {
        std::vector<int> members;
        for (int v = 1; v <= n; ++v)
            if ((vars >> (v - 1)) & 1)
                members.push_back(v);
        if (static_cast<int>(members.size()) > max_width)
            continue;
        const int w = static_cast<int>(members.size());
        for (int signs = 0; signs < (1 << w); ++signs) {
            std::vector<int> clause;
            for (int k = 0; k < w; ++k)
                clause.push_back(((signs >> k) & 1) ? members[k] : -members[k]);
            pool.push_back(std::move(clause));
        }
    }
    return pool;
}

}  // namespace testutil
