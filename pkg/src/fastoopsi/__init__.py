"""Spike inference from one-dimensional calcium fluorescence traces.

Three estimators share one result type:

* :func:`run` -- nonnegative MAP inference with a log-barrier Newton solver
  and optional pseudo-EM parameter refinement;
* :func:`wiener_filter` -- Gaussian-prior (quadratic) baseline;
* :func:`binning_infer` -- thresholded-difference baseline.

:func:`simulate` draws synthetic recordings with known ground truth.
"""
__version__ = "0.1.0"

from .errors import (ConfigError, DegenerateInputError, DegenerateUpdateError, DomainError,
                     InfeasibleError, NumericalError, OopsiError, SingularMatrixError,
                     TraceFormatError)
from .model import (CalciumTrace, FluorescenceTrace, SimConfig, SpikeTrain, filter_calcium,
                    observe_fluorescence, sample_spikes, simulate)
from .preprocess import MAD_K, ModelParams, detrend, init_params, mad_sigma, normalize
from .linalg import (DiffOperator, Tridiag, apply_M, apply_Mt, assemble_hessian,
                     solve_tridiagonal)
from .oopsi import (InferenceResult, SolverOptions, gradient, hessian, map_estimate,
                    posterior_value, run, update_params)
from .wiener import WienerOptions, wiener_filter, wiener_objective
from .binning import binning_infer, discretize_binning
from .evaluation import EvalReport, evaluate
from .io import read_trace, write_result

__all__ = [
    "CalciumTrace", "ConfigError", "DegenerateInputError", "DegenerateUpdateError", "DiffOperator",
    "DomainError", "EvalReport", "FluorescenceTrace", "InfeasibleError", "InferenceResult", "MAD_K",
    "ModelParams", "NumericalError", "OopsiError", "SimConfig", "SingularMatrixError",
    "SolverOptions", "SpikeTrain", "TraceFormatError", "Tridiag", "WienerOptions", "apply_M",
    "apply_Mt", "assemble_hessian", "binning_infer", "detrend", "discretize_binning", "evaluate",
    "filter_calcium", "gradient", "hessian", "init_params", "mad_sigma", "map_estimate",
    "normalize", "observe_fluorescence", "posterior_value", "read_trace", "run",
    "sample_spikes", "simulate", "solve_tridiagonal", "update_params", "wiener_filter",
    "wiener_objective", "write_result",
]
