#include "nblsat/cnf.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace nblsat {

namespace {

bool parse_int(std::string_view token, long long& out) {
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

std::vector<std::string_view> split_tokens(std::string_view line) {
    std::vector<std::string_view> tokens;
    size_t pos = 0;
    while (pos < line.size()) {
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r'))
            ++pos;
        size_t start = pos;
        while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t' && line[pos] != '\r')
            ++pos;
        if (pos > start)
            tokens.push_back(line.substr(start, pos - start));
    }
    return tokens;
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    size_t start = 0;
    while (start <= text.size()) {
        size_t eol = text.find('\n', start);
        if (eol == std::string_view::npos) {
            lines.push_back(text.substr(start));
            break;
        }
        lines.push_back(text.substr(start, eol - start));
        start = eol + 1;
    }
    return lines;
}

}  // namespace

ParseResult parse_dimacs(std::string_view text) {
    if (text.empty())
        throw ParseError("empty input", 0);

    bool have_header = false;
    long long declared_n = 0;
    long long declared_m = 0;
    std::vector<Clause> clauses;
    Clause current;
    bool clause_open = false;

    const auto lines = split_lines(text);
    for (size_t k = 0; k < lines.size(); ++k) {
        const int line_no = static_cast<int>(k + 1);
        const auto tokens = split_tokens(lines[k]);
        if (tokens.empty() || tokens[0][0] == 'c')
            continue;

        if (tokens[0] == "p") {
            if (have_header)
                throw ParseError("duplicate header", line_no);
            if (tokens.size() != 4 || tokens[1] != "cnf")
                throw ParseError("malformed header, expected 'p cnf <vars> <clauses>'", line_no);
            if (!parse_int(tokens[2], declared_n) || !parse_int(tokens[3], declared_m) ||
                declared_n < 0 || declared_m < 0)
                throw ParseError("malformed header counts", line_no);
            have_header = true;
            continue;
        }

        if (!have_header)
            throw ParseError("literals before 'p cnf' header", line_no);
        for (std::string_view tok : tokens) {
            long long value = 0;
            if (!parse_int(tok, value))
                throw ParseError("non-integer token '" + std::string(tok) + "'", line_no);
            if (value == 0) {
                clauses.push_back(std::move(current));
                current.clear();
                clause_open = false;
            } else {
                const long long magnitude = value < 0 ? -value : value;
                if (magnitude > declared_n)
                    throw ParseError("literal " + std::string(tok) +
                                         " exceeds declared variable count " +
                                         std::to_string(declared_n),
                                     line_no);
                current.push_back(Literal(static_cast<int>(value)));
                clause_open = true;
            }
        }
    }

    if (!have_header)
        throw ParseError("missing 'p cnf' header", static_cast<int>(lines.size()));
    if (clause_open)
        clauses.push_back(std::move(current));  // unterminated final clause, tolerated

    ParseResult result;
    result.declared_clause_count = static_cast<int>(declared_m);
    result.clause_count_mismatch = static_cast<long long>(clauses.size()) != declared_m;
    result.formula = CnfFormula(static_cast<int>(declared_n), std::move(clauses));
    return result;
}

ParseResult parse_dimacs_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_dimacs(buffer.str());
}

std::pair<CnfFormula, NormalizationReport> normalize(const CnfFormula& f) {
    NormalizationReport report;
    std::vector<Clause> out;
    out.reserve(f.clauses().size());

    int index = 0;
    for (const Clause& clause : f.clauses()) {
        ++index;
        Clause kept;
        kept.reserve(clause.size());
        std::unordered_set<int> seen;
        for (const Literal& lit : clause) {
            if (!seen.insert(lit.dimacs()).second) {
                ++report.removed_duplicate_literals;
                continue;
            }
            kept.push_back(lit);
        }
        bool tautological = false;
        for (const Literal& lit : kept)
            if (seen.contains(-lit.dimacs()))
                tautological = true;
        if (tautological)
            report.tautological_clauses.push_back(index);
        if (kept.empty())
            report.empty_clause_present = true;
        out.push_back(std::move(kept));
    }
    return {CnfFormula(f.variable_count(), std::move(out)), report};
}

Ternary evaluate(const CnfFormula& f, const PartialAssignment& a) {
    bool undetermined = false;
    for (const Clause& clause : f.clauses()) {
        bool satisfied = false;
        bool open = false;
        for (const Literal& lit : clause) {
            if (!a.is_bound(lit.variable())) {
                open = true;
            } else if (a.value(lit.variable()) == lit.is_positive()) {
                satisfied = true;
                break;
            }
        }
        if (satisfied)
            continue;
        if (!open)
            return Ternary::False;
        undetermined = true;
    }
    return undetermined ? Ternary::Undetermined : Ternary::True;
}

std::string write_dimacs(const CnfFormula& f) {
    std::ostringstream out;
    out << "p cnf " << f.variable_count() << ' ' << f.clause_count() << '\n';
    for (const Clause& clause : f.clauses()) {
        for (const Literal& lit : clause)
            out << lit.dimacs() << ' ';
        out << "0\n";
    }
    return out.str();
}

}  // namespace nblsat
