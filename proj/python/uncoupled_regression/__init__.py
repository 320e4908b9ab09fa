"""Uncoupled regression from pairwise comparisons.

Thin Python layer over the C++ core. Arrays are NumPy float64; feature
matrices are (n, d) and parameter vectors carry a trailing bias entry when
fitted with ``fit_intercept=True``.
"""

from ._core import (
    Distribution,
    DomainError,
    Error,
    ParameterError,
    RiskConfig,
    ShapeError,
    __version__,
    bregman_divergence,
    empirical,
    err_objective,
    gaussian,
    generate_synthetic,
    kde,
    lr_fit,
    mse,
    optimal_lambda,
    ra_empirical_risk,
    ra_fit,
    rank_predict,
    ranker_fit,
    run_synthetic,
    sample_pairs,
    tt_fit,
    tt_predict,
    tt_surrogate_risk,
    tune_weights,
    tune_weights_empirical,
    uniform,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
