"""Sparse identification of graph-structured dynamics.

C++ core exposed through pybind11: graph generation, coupled Stuart-Landau
simulation, polynomial feature libraries, the plain and graph-penalized
STLSQ solvers, and validation metrics.
"""

from ._sindyg import (
    CoefficientMatrix,
    DivergenceError,
    FormatError,
    SolverError,
    FeatureLibrary,
    SLParams,
    SolverConfig,
    StateVariableMap,
    Trajectory,
    WeightedGraph,
    build_library,
    cei,
    column_normalize,
    complexity,
    compute_penalty,
    derive_seed,
    evaluate_library,
    finite_diff_derivs,
    fit_sindy,
    fit_sindyg,
    generate_er,
    generate_sf,
    load_graph,
    load_model,
    mse,
    normalized_adjacency,
    predict_derivs,
    r_squared,
    random_initial_state,
    sample_random_params,
    save_graph,
    save_model,
    simulate_model,
    simulate_sl,
    sl_rhs,
    stlsq,
    stlsq_graph,
    true_coefficients,
)

__all__ = [
    "CoefficientMatrix",
    "DivergenceError",
    "FormatError",
    "SolverError",
    "FeatureLibrary",
    "SLParams",
    "SolverConfig",
    "StateVariableMap",
    "Trajectory",
    "WeightedGraph",
    "build_library",
    "cei",
    "column_normalize",
    "complexity",
    "compute_penalty",
    "derive_seed",
    "evaluate_library",
    "finite_diff_derivs",
    "fit_sindy",
    "fit_sindyg",
    "generate_er",
    "generate_sf",
    "load_graph",
    "load_model",
    "mse",
    "normalized_adjacency",
    "predict_derivs",
    "r_squared",
    "random_initial_state",
    "sample_random_params",
    "save_graph",
    "save_model",
    "simulate_model",
    "simulate_sl",
    "sl_rhs",
    "stlsq",
    "stlsq_graph",
    "true_coefficients",
]
