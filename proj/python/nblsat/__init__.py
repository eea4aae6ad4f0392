"""Noise-superposition SAT simulation engine.

The heavy lifting lives in the compiled extension; this package re-exports
its public surface.
"""

from nblsat._core import (
    Backend,
    BindingScore,
    CheckConfig,
    CheckVerdict,
    CnfFormula,
    CorrelationEstimate,
    DimacsParseError,
    ExactResult,
    InconclusiveError,
    InconsistencyError,
    NoiseTape,
    NormalizationReport,
    ParseResult,
    PartialAssignment,
    RoundRecord,
    SeedSpec,
    SnrEstimate,
    SolveOptions,
    SolveResult,
    StoppingRule,
    TapeStream,
    Ternary,
    TraceRecord,
    accumulate,
    check,
    count_satisfying,
    draw_tape,
    eval_sigma,
    eval_tau,
    evaluate,
    linear_checkpoints,
    log_checkpoints,
    merge,
    normalize,
    parse_dimacs,
    parse_dimacs_file,
    required_samples,
    run_correlation,
    run_trace,
    sample_sn,
    score_binding,
    snr,
    solve,
    solve_cube,
    write_dimacs,
)

__version__ = "0.1.0"

__all__ = [
    "Backend",
    "BindingScore",
    "CheckConfig",
    "CheckVerdict",
    "CnfFormula",
    "CorrelationEstimate",
    "DimacsParseError",
    "ExactResult",
    "InconclusiveError",
    "InconsistencyError",
    "NoiseTape",
    "NormalizationReport",
    "ParseResult",
    "PartialAssignment",
    "RoundRecord",
    "SeedSpec",
    "SnrEstimate",
    "SolveOptions",
    "SolveResult",
    "StoppingRule",
    "TapeStream",
    "Ternary",
    "TraceRecord",
    "accumulate",
    "check",
    "count_satisfying",
    "draw_tape",
    "eval_sigma",
    "eval_tau",
    "evaluate",
    "linear_checkpoints",
    "log_checkpoints",
    "merge",
    "normalize",
    "parse_dimacs",
    "parse_dimacs_file",
    "required_samples",
    "run_correlation",
    "run_trace",
    "sample_sn",
    "score_binding",
    "snr",
    "solve",
    "solve_cube",
    "write_dimacs",
]
