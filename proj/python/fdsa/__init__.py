from ._core import (
    Algorithm,
    Coupling,
    EstimatorConfig,
    GainSchedule,
    Method,
    ParameterError,
    Problem,
    Scheme,
    UnsupportedFamily,
    best_rate_kw,
    bias_probe,
    estimate_h,
    fit_loglog_slope,
    make_problem,
    predict_sigma,
    problem_names,
    rmse_curve,
    run_cli,
    variance_probe,
)

__all__ = [
    "Algorithm",
    "Coupling",
    "EstimatorConfig",
    "GainSchedule",
    "Method",
    "ParameterError",
    "Problem",
    "Scheme",
    "UnsupportedFamily",
    "best_rate_kw",
    "bias_probe",
    "estimate_h",
    "fit_loglog_slope",
    "make_problem",
    "predict_sigma",
    "problem_names",
    "rmse_curve",
    "run_cli",
    "variance_probe",
]
