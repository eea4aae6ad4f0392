#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nblsat {

// A literal in DIMACS encoding: +v is the positive literal of variable v,
// -v the negative one. Variables are 1-based everywhere; 0 is not a literal.
class Literal {
public:
    explicit Literal(int dimacs) : value_(dimacs) {
        if (dimacs == 0)
            throw std::invalid_argument("literal value 0 is reserved for the clause terminator");
    }

    static Literal positive(int variable) { return Literal(variable); }
    static Literal negative(int variable) { return Literal(-variable); }

    int variable() const { return value_ < 0 ? -value_ : value_; }
    bool is_positive() const { return value_ > 0; }
    Literal negated() const { return Literal(-value_); }
    int dimacs() const { return value_; }

    friend auto operator<=>(const Literal&, const Literal&) = default;

private:
    int value_;
};

using Clause = std::vector<Literal>;

class CnfFormula {
public:
    CnfFormula() = default;

    CnfFormula(int variable_count, std::vector<Clause> clauses)
        : n_(variable_count), clauses_(std::move(clauses)) {
        if (n_ < 0)
            throw std::invalid_argument("negative variable count");
        for (const Clause& c : clauses_)
            for (const Literal& lit : c)
                if (lit.variable() > n_)
                    throw std::invalid_argument("literal " + std::to_string(lit.dimacs()) +
                                                " exceeds declared variable count " +
                                                std::to_string(n_));
    }

    int variable_count() const { return n_; }
    int clause_count() const { return static_cast<int>(clauses_.size()); }
    const std::vector<Clause>& clauses() const { return clauses_; }

    friend bool operator==(const CnfFormula&, const CnfFormula&) = default;

private:
    int n_ = 0;
    std::vector<Clause> clauses_;
};

// Per-variable binding state. A variable may be bound at most once.
class PartialAssignment {
public:
    explicit PartialAssignment(int variable_count)
        : states_(static_cast<size_t>(variable_count), State::Unbound) {
        if (variable_count < 0)
            throw std::invalid_argument("negative variable count");
    }

    static PartialAssignment from_dimacs(int variable_count, const std::vector<int>& literals) {
        PartialAssignment a(variable_count);
        for (int lit : literals) {
            Literal l(lit);
            a.bind(l.variable(), l.is_positive());
        }
        return a;
    }

    int variable_count() const { return static_cast<int>(states_.size()); }

    void bind(int variable, bool value) {
        check_range(variable);
        State& s = states_[static_cast<size_t>(variable - 1)];
        if (s != State::Unbound)
            throw std::invalid_argument("variable " + std::to_string(variable) + " already bound");
        s = value ? State::True : State::False;
    }

    bool is_bound(int variable) const {
        check_range(variable);
        return states_[static_cast<size_t>(variable - 1)] != State::Unbound;
    }

    // Pre: is_bound(variable).
    bool value(int variable) const {
        check_range(variable);
        State s = states_[static_cast<size_t>(variable - 1)];
        if (s == State::Unbound)
            throw std::logic_error("variable " + std::to_string(variable) + " is unbound");
        return s == State::True;
    }

    int bound_count() const {
        int k = 0;
        for (State s : states_)
            k += (s != State::Unbound);
        return k;
    }

    int unbound_count() const { return variable_count() - bound_count(); }

    // Bound variables as signed DIMACS literals, ascending by variable.
    std::vector<int> to_dimacs() const {
        std::vector<int> out;
        for (int v = 1; v <= variable_count(); ++v)
            if (is_bound(v))
                out.push_back(value(v) ? v : -v);
        return out;
    }

    friend bool operator==(const PartialAssignment&, const PartialAssignment&) = default;

private:
    enum class State : std::uint8_t { Unbound, True, False };

    void check_range(int variable) const {
        if (variable < 1 || variable > variable_count())
            throw std::out_of_range("variable " + std::to_string(variable) + " out of range");
    }

    std::vector<State> states_;
};

enum class Ternary { False, True, Undetermined };

struct NormalizationReport {
    int removed_duplicate_literals = 0;
    std::vector<int> tautological_clauses;  // 1-based clause indices
    bool empty_clause_present = false;
};

struct ParseResult {
    CnfFormula formula;
    bool clause_count_mismatch = false;  // header clause count differs from parsed count
    int declared_clause_count = 0;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, int line)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

    int line() const { return line_; }

private:
    int line_;
};

ParseResult parse_dimacs(std::string_view text);
ParseResult parse_dimacs_file(const std::string& path);

std::pair<CnfFormula, NormalizationReport> normalize(const CnfFormula& f);

// True iff every clause has a satisfied literal, False iff some clause has
// all literals falsified, Undetermined otherwise.
Ternary evaluate(const CnfFormula& f, const PartialAssignment& a);

std::string write_dimacs(const CnfFormula& f);

}  // namespace nblsat
