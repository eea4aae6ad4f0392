#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "nblsat/cnf.hpp"

using namespace nblsat;

TEST_CASE("parse_dimacs reads header, polarity, and clause structure") {
    const auto parsed = parse_dimacs("p cnf 2 2\n1 -2 0\n-1 -2 0\n");
    CHECK(parsed.formula == testutil::two_clause_sat());
    CHECK_FALSE(parsed.clause_count_mismatch);
    CHECK(parsed.declared_clause_count == 2);
}

TEST_CASE("parse_dimacs accepts an empty clause list") {
    const auto parsed = parse_dimacs("p cnf 1 0\n");
    CHECK(parsed.formula.variable_count() == 1);
    CHECK(parsed.formula.clause_count() == 0);
}

TEST_CASE("parse_dimacs reads the four-clause chain instance") {
    const auto parsed = parse_dimacs("p cnf 3 4\n-1 0\n2 3 0\n1 -3 0\n-1 -2 3 0\n");
    CHECK(parsed.formula == testutil::forced_chain());
}

TEST_CASE("parse_dimacs skips comments and tolerates a clause-count mismatch") {
    const auto parsed = parse_dimacs("c comment line\np cnf 2 3\nc another\n1 2 0\n");
    CHECK(parsed.formula.clause_count() == 1);
    CHECK(parsed.clause_count_mismatch);
    CHECK(parsed.declared_clause_count == 3);
}

TEST_CASE("parse_dimacs error paths") {
    CHECK_THROWS_AS(parse_dimacs(""), ParseError);
    CHECK_THROWS_AS(parse_dimacs("p cnf 1 1\np cnf 1 1\n1 0\n"), ParseError);  // duplicate header
    CHECK_THROWS_AS(parse_dimacs("1 0\n"), ParseError);                        // missing header
    CHECK_THROWS_AS(parse_dimacs("p cnf 1 1\n2 0\n"), ParseError);             // magnitude > n
    CHECK_THROWS_AS(parse_dimacs("p cnf 1 1\nx 0\n"), ParseError);             // non-integer
    CHECK_THROWS_AS(parse_dimacs("p dnf 1 1\n"), ParseError);

    try {
        parse_dimacs("p cnf 1 1\nc fine\n7 0\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
}

TEST_CASE("normalize removes duplicate literals and keeps tautologies") {
    const auto f = testutil::make_formula(2, {{1, 1, -2}});
    const auto [norm, report] = normalize(f);
    CHECK(norm == testutil::make_formula(2, {{1, -2}}));
    CHECK(report.removed_duplicate_literals == 1);
    CHECK(report.tautological_clauses.empty());
    CHECK_FALSE(report.empty_clause_present);
}

TEST_CASE("normalize flags tautological and empty clauses without dropping them") {
    const auto f = testutil::make_formula(2, {{1, -1}, {}});
    const auto [norm, report] = normalize(f);
    CHECK(norm == f);
    CHECK(report.tautological_clauses == std::vector<int>{1});
    CHECK(report.empty_clause_present);
}

TEST_CASE("normalize leaves an already-normal formula untouched") {
    const auto [norm, report] = normalize(testutil::two_clause_sat());
    CHECK(norm == testutil::two_clause_sat());
    CHECK(report.removed_duplicate_literals == 0);
    CHECK(report.tautological_clauses.empty());
    CHECK_FALSE(report.empty_clause_present);
}

TEST_CASE("normalize is idempotent on random formulas") {
    std::mt19937_64 rng(11);
    for (int round = 0; round < 50; ++round) {
        const auto f = testutil::random_cnf(rng, 4, 4, 1, 3);
        const auto [once, report1] = normalize(f);
        const auto [twice, report2] = normalize(once);
        CHECK(once == twice);
        CHECK(report2.removed_duplicate_literals == 0);
    }
}

TEST_CASE("evaluate on the two-clause instance") {
    const auto f = testutil::two_clause_sat();
    CHECK(evaluate(f, PartialAssignment::from_dimacs(2, {1, -2})) == Ternary::True);
    CHECK(evaluate(f, PartialAssignment::from_dimacs(2, {1})) == Ternary::Undetermined);
    CHECK(evaluate(testutil::unit_conflict(), PartialAssignment::from_dimacs(1, {1})) ==
          Ternary::False);
}

TEST_CASE("evaluate treats an empty clause as falsified") {
    const auto f = testutil::make_formula(1, {{}});
    CHECK(evaluate(f, PartialAssignment(1)) == Ternary::False);
}

TEST_CASE("evaluate agrees with the truth-table walk on full assignments") {
    std::mt19937_64 rng(23);
    for (int round = 0; round < 40; ++round) {
        const int n = 1 + static_cast<int>(rng() % 4);
        const auto f = testutil::random_cnf(rng, n, 1 + static_cast<int>(rng() % 5), 1, 3);
        std::uint64_t count = 0;
        for (std::uint64_t word = 0; word < (UINT64_C(1) << n); ++word) {
            PartialAssignment a(n);
            for (int v = 1; v <= n; ++v)
                a.bind(v, ((word >> (v - 1)) & 1) != 0);
            const Ternary value = evaluate(f, a);
            CHECK(value != Ternary::Undetermined);  // full assignment decides
            count += value == Ternary::True;
        }
        CHECK(count == testutil::truth_table_count(f));
    }
}

TEST_CASE("write_dimacs canonical form") {
    CHECK(write_dimacs(testutil::unit_conflict()) == "p cnf 1 2\n1 0\n-1 0\n");
    CHECK(write_dimacs(CnfFormula(1, {})) == "p cnf 1 0\n");
}

TEST_CASE("round trip: parse(write(f)) == f") {
    CHECK(parse_dimacs(write_dimacs(testutil::forced_chain())).formula ==
          testutil::forced_chain());
    std::mt19937_64 rng(31);
    for (int round = 0; round < 60; ++round) {
        const auto f = testutil::random_cnf(rng, 1 + static_cast<int>(rng() % 6),
                                            static_cast<int>(rng() % 6), 1, 3);
        CHECK(parse_dimacs(write_dimacs(f)).formula == f);
    }
}

TEST_CASE("formula construction validates literal ranges") {
    CHECK_THROWS_AS(testutil::make_formula(1, {{2}}), std::invalid_argument);
    CHECK_THROWS_AS(Literal(0), std::invalid_argument);
}

TEST_CASE("partial assignment rejects rebinding") {
    PartialAssignment a(2);
    a.bind(1, true);
    CHECK_THROWS_AS(a.bind(1, false), std::invalid_argument);
    CHECK(a.to_dimacs() == std::vector<int>{1});
    CHECK(a.unbound_count() == 1);
}
