#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>
#include <variant>

#include "nblsat/algorithms.hpp"
#include "nblsat/cnf.hpp"
#include "nblsat/exact.hpp"
#include "nblsat/noise.hpp"

namespace py = pybind11;
using namespace nblsat;

namespace {

std::vector<std::vector<int>> clauses_as_ints(const CnfFormula& f) {
    std::vector<std::vector<int>> out;
    out.reserve(f.clauses().size());
    for (const Clause& clause : f.clauses()) {
        std::vector<int> lits;
        lits.reserve(clause.size());
        for (const Literal& lit : clause)
            lits.push_back(lit.dimacs());
        out.push_back(std::move(lits));
    }
    return out;
}

CnfFormula formula_from_ints(int variable_count, const std::vector<std::vector<int>>& clauses) {
    std::vector<Clause> parsed;
    parsed.reserve(clauses.size());
    for (const auto& ints : clauses) {
        Clause clause;
        clause.reserve(ints.size());
        for (int lit : ints)
            clause.push_back(Literal(lit));
        parsed.push_back(std::move(clause));
    }
    return CnfFormula(variable_count, std::move(parsed));
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::satisfiable: return "SATISFIABLE";
        case Verdict::unsatisfiable: return "UNSATISFIABLE";
        case Verdict::inconclusive: return "INCONCLUSIVE";
    }
    return "INCONCLUSIVE";
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Noise-superposition SAT simulation engine";

    py::register_exception<ParseError>(m, "DimacsParseError", PyExc_ValueError);
    py::register_exception<InconclusiveError>(m, "InconclusiveError", PyExc_RuntimeError);
    py::register_exception<InconsistencyError>(m, "InconsistencyError", PyExc_RuntimeError);

    py::enum_<Backend>(m, "Backend")
        .value("exact", Backend::exact)
        .value("stochastic", Backend::stochastic);

    py::enum_<Ternary>(m, "Ternary")
        .value("false_", Ternary::False)
        .value("true_", Ternary::True)
        .value("undetermined", Ternary::Undetermined);

    py::class_<CnfFormula>(m, "CnfFormula")
        .def(py::init(&formula_from_ints), py::arg("variable_count"), py::arg("clauses"))
        .def_property_readonly("variable_count", &CnfFormula::variable_count)
        .def_property_readonly("clause_count", &CnfFormula::clause_count)
        .def_property_readonly("clauses", &clauses_as_ints)
        .def("__eq__", [](const CnfFormula& a, const CnfFormula& b) { return a == b; })
        .def("__repr__", [](const CnfFormula& f) {
            std::ostringstream out;
            out << "CnfFormula(n=" << f.variable_count() << ", m=" << f.clause_count() << ")";
            return out.str();
        });

    py::class_<PartialAssignment>(m, "PartialAssignment")
        .def(py::init<int>(), py::arg("variable_count"))
        .def_static("from_literals", &PartialAssignment::from_dimacs, py::arg("variable_count"),
                    py::arg("literals"))
        .def_property_readonly("variable_count", &PartialAssignment::variable_count)
        .def("bind", &PartialAssignment::bind, py::arg("variable"), py::arg("value"))
        .def("is_bound", &PartialAssignment::is_bound, py::arg("variable"))
        .def("value", &PartialAssignment::value, py::arg("variable"))
        .def("to_literals", &PartialAssignment::to_dimacs)
        .def("__repr__", [](const PartialAssignment& a) {
            std::ostringstream out;
            out << "PartialAssignment(";
            bool first = true;
            for (int lit : a.to_dimacs()) {
                if (!first)
                    out << ", ";
                out << lit;
                first = false;
            }
            out << ")";
            return out.str();
        });

    py::class_<NormalizationReport>(m, "NormalizationReport")
        .def_readonly("removed_duplicate_literals", &NormalizationReport::removed_duplicate_literals)
        .def_readonly("tautological_clauses", &NormalizationReport::tautological_clauses)
        .def_readonly("empty_clause_present", &NormalizationReport::empty_clause_present);

    py::class_<ParseResult>(m, "ParseResult")
        .def_readonly("formula", &ParseResult::formula)
        .def_readonly("clause_count_mismatch", &ParseResult::clause_count_mismatch)
        .def_readonly("declared_clause_count", &ParseResult::declared_clause_count);

    m.def("parse_dimacs", [](const std::string& text) { return parse_dimacs(text); },
          py::arg("text"), "Parse DIMACS CNF text.");
    m.def("parse_dimacs_file", &parse_dimacs_file, py::arg("path"));
    m.def("write_dimacs", &write_dimacs, py::arg("formula"));
    m.def("normalize", &normalize, py::arg("formula"),
          "Deduplicate literals; flag tautological and empty clauses.");
    m.def("evaluate", &evaluate, py::arg("formula"), py::arg("assignment"));

    py::class_<SeedSpec>(m, "SeedSpec")
        .def(py::init<std::uint64_t>(), py::arg("master_seed") = 0)
        .def_readwrite("master_seed", &SeedSpec::master_seed);

    py::class_<NoiseTape>(m, "NoiseTape")
        .def_property_readonly("variable_count", &NoiseTape::variable_count)
        .def_property_readonly("clause_count", &NoiseTape::clause_count)
        .def("at",
             [](const NoiseTape& tape, int clause, int variable, bool positive) {
                 return tape.at(clause, variable, positive);
             },
             py::arg("clause"), py::arg("variable"), py::arg("positive"));

    py::enum_<TapeStream>(m, "TapeStream")
        .value("shared", TapeStream::shared)
        .value("tau_only", TapeStream::tau_only)
        .value("sigma_only", TapeStream::sigma_only);

    m.def("draw_tape", &draw_tape, py::arg("seed"), py::arg("sample_index"),
          py::arg("variable_count"), py::arg("clause_count"),
          py::arg("stream") = TapeStream::shared);
    m.def("eval_tau", &eval_tau, py::arg("tape"), py::arg("bindings"));
    m.def("eval_sigma", &eval_sigma, py::arg("tape"), py::arg("formula"));
    m.def("sample_sn", &sample_sn, py::arg("seed"), py::arg("sample_index"), py::arg("formula"),
          py::arg("bindings"));

    py::class_<CorrelationEstimate>(m, "CorrelationEstimate")
        .def(py::init<>())
        .def_readonly("sample_count", &CorrelationEstimate::sample_count)
        .def_readonly("mean", &CorrelationEstimate::mean)
        .def_readonly("m2", &CorrelationEstimate::m2)
        .def_property_readonly("variance", &CorrelationEstimate::variance)
        .def_property_readonly("stderr", &CorrelationEstimate::std_error)
        .def("__repr__", [](const CorrelationEstimate& est) {
            std::ostringstream out;
            out << "CorrelationEstimate(n=" << est.sample_count << ", mean=" << est.mean << ")";
            return out.str();
        });

    m.def("accumulate", &accumulate, py::arg("estimate"), py::arg("value"));
    m.def("merge", &merge, py::arg("a"), py::arg("b"));

    py::class_<StoppingRule>(m, "StoppingRule")
        .def(py::init<>())
        .def_readwrite("max_samples", &StoppingRule::max_samples)
        .def_readwrite("block_size", &StoppingRule::block_size)
        .def_readwrite("min_samples", &StoppingRule::min_samples)
        .def_readwrite("convergence_digits", &StoppingRule::convergence_digits)
        .def_readwrite("zero_band", &StoppingRule::zero_band);

    m.def("run_correlation", &run_correlation, py::arg("formula"), py::arg("bindings"),
          py::arg("seed"), py::arg("stop"), py::arg("shared_tape") = true, py::arg("threads") = 0,
          py::call_guard<py::gil_scoped_release>());

    py::class_<TraceRecord>(m, "TraceRecord")
        .def_readonly("sample_count", &TraceRecord::sample_count)
        .def_readonly("mean", &TraceRecord::mean)
        .def_readonly("stderr", &TraceRecord::std_error);

    m.def(
        "run_trace",
        [](const CnfFormula& f, const PartialAssignment& bindings, SeedSpec seed,
           const StoppingRule& stop, const std::vector<std::uint64_t>& points, bool shared_tape,
           unsigned threads) {
            std::vector<TraceRecord> records;
            const auto estimate = run_trace(
                f, bindings, seed, stop, points,
                [&records](const TraceRecord& record) { records.push_back(record); }, shared_tape,
                threads);
            return std::make_pair(estimate, records);
        },
        py::arg("formula"), py::arg("bindings"), py::arg("seed"), py::arg("stop"),
        py::arg("emission_points"), py::arg("shared_tape") = true, py::arg("threads") = 0);

    m.def("linear_checkpoints", &linear_checkpoints, py::arg("stride"), py::arg("max_samples"));
    m.def("log_checkpoints", &log_checkpoints, py::arg("points_per_decade"),
          py::arg("max_samples"));

    py::class_<ExactResult>(m, "ExactResult")
        .def_readonly("satisfying_count", &ExactResult::satisfying_count)
        .def_readonly("analytic_mean", &ExactResult::analytic_mean)
        .def_readonly("satisfiable", &ExactResult::satisfiable)
        .def("__repr__", [](const ExactResult& r) {
            std::ostringstream out;
            out << "ExactResult(k=" << r.satisfying_count << ", mean=" << r.analytic_mean << ")";
            return out.str();
        });

    m.def("count_satisfying",
          py::overload_cast<const CnfFormula&, const PartialAssignment&>(&count_satisfying),
          py::arg("formula"), py::arg("bindings"));
    m.def("count_satisfying", py::overload_cast<const CnfFormula&>(&count_satisfying),
          py::arg("formula"));

    py::class_<SnrEstimate>(m, "SnrEstimate")
        .def_readonly("mu1", &SnrEstimate::mu1)
        .def_readonly("sigma", &SnrEstimate::sigma)
        .def_readonly("snr", &SnrEstimate::snr)
        .def_readonly("variable_count", &SnrEstimate::variable_count)
        .def_readonly("clause_count", &SnrEstimate::clause_count)
        .def_readonly("sample_count", &SnrEstimate::sample_count)
        .def_readonly("satisfying_count", &SnrEstimate::satisfying_count);

    m.def("snr", &snr, py::arg("n"), py::arg("m"), py::arg("samples"), py::arg("k"));
    m.def(
        "required_samples",
        [](int n, int m, std::uint64_t k, double target_snr,
           std::uint64_t cap) -> std::optional<std::uint64_t> {
            return required_samples(n, m, k, target_snr, cap);
        },
        py::arg("n"), py::arg("m"), py::arg("k"), py::arg("target_snr"),
        py::arg("cap") = (UINT64_C(1) << 62),
        "Smallest N reaching target_snr, or None when it exceeds cap.");

    py::class_<CheckConfig>(m, "CheckConfig")
        .def(py::init<>())
        .def_readwrite("backend", &CheckConfig::backend)
        .def_readwrite("seed", &CheckConfig::seed)
        .def_readwrite("stop", &CheckConfig::stop)
        .def_readwrite("z_threshold", &CheckConfig::z_threshold)
        .def_readwrite("snr_target", &CheckConfig::snr_target)
        .def_readwrite("threads", &CheckConfig::threads);

    py::class_<CheckVerdict>(m, "CheckVerdict")
        .def_property_readonly("satisfiable", &CheckVerdict::satisfiable)
        .def_property_readonly("verdict",
                               [](const CheckVerdict& v) { return verdict_name(v.verdict); })
        .def_readonly("backend", &CheckVerdict::backend)
        .def_readonly("z_score", &CheckVerdict::z_score)
        .def_readonly("sample_budget", &CheckVerdict::sample_budget)
        .def_readonly("budget_feasible", &CheckVerdict::budget_feasible)
        .def_property_readonly("exact",
                               [](const CheckVerdict& v) -> std::optional<ExactResult> {
                                   if (std::holds_alternative<ExactResult>(v.estimate))
                                       return std::get<ExactResult>(v.estimate);
                                   return std::nullopt;
                               })
        .def_property_readonly(
            "estimate",
            [](const CheckVerdict& v) -> std::optional<CorrelationEstimate> {
                if (std::holds_alternative<CorrelationEstimate>(v.estimate))
                    return std::get<CorrelationEstimate>(v.estimate);
                return std::nullopt;
            })
        .def("__repr__", [](const CheckVerdict& v) {
            std::ostringstream out;
            out << "CheckVerdict(" << verdict_name(v.verdict) << ")";
            return out.str();
        });

    m.def("check",
          py::overload_cast<const CnfFormula&, const PartialAssignment&, const CheckConfig&>(
              &check),
          py::arg("formula"), py::arg("bindings"), py::arg("config"),
          py::call_guard<py::gil_scoped_release>());
    m.def("check", py::overload_cast<const CnfFormula&, const CheckConfig&>(&check),
          py::arg("formula"), py::arg("config"), py::call_guard<py::gil_scoped_release>());

    py::class_<RoundRecord>(m, "RoundRecord")
        .def_readonly("variable", &RoundRecord::variable)
        .def_readonly("tested_value", &RoundRecord::tested_value)
        .def_readonly("satisfiable", &RoundRecord::satisfiable);

    py::class_<SolveOptions>(m, "SolveOptions")
        .def(py::init<>())
        .def_readwrite("bind_true_first", &SolveOptions::bind_true_first)
        .def_readwrite("variable_order", &SolveOptions::variable_order);

    py::class_<SolveResult>(m, "SolveResult")
        .def_readonly("assignment", &SolveResult::assignment)
        .def_readonly("per_round", &SolveResult::per_round)
        .def_readonly("check_invocations", &SolveResult::check_invocations);

    m.def("solve", &solve, py::arg("formula"), py::arg("config"),
          py::arg("options") = SolveOptions{}, py::call_guard<py::gil_scoped_release>());
    m.def("solve_cube", &solve_cube, py::arg("formula"), py::arg("config"),
          py::arg("options") = SolveOptions{}, py::call_guard<py::gil_scoped_release>());

    py::class_<BindingScore>(m, "BindingScore")
        .def_readonly("variable", &BindingScore::variable)
        .def_readonly("value", &BindingScore::value)
        .def_readonly("mean", &BindingScore::mean)
        .def_readonly("stderr", &BindingScore::std_error)
        .def_readonly("subspace_count", &BindingScore::subspace_count);

    m.def("score_binding", &score_binding, py::arg("formula"), py::arg("bindings"),
          py::arg("variable"), py::arg("value"), py::arg("config"),
          py::call_guard<py::gil_scoped_release>());
}
