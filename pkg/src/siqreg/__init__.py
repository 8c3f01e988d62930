"""Bayesian single-index quantile regression with a Gaussian-process link."""

__version__ = "0.1.0"

from .ald import (
    MixtureConstants,
    QuantileLevel,
    ald_cdf,
    ald_logpdf,
    ald_sample,
    check_loss,
    mixture_constants,
)
from .analysis import (
    NormalizedIndex,
    PosteriorSummary,
    acf,
    effective_sample_size,
    fitted_link,
    mse_against_truth,
    normalize_index,
    summarize,
)
from .data import Dataset, ingest_csv
from .estimator import SingleIndexQuantileRegressor
from .kernel import (
    FactoredCovariance,
    FactorizationError,
    KernelParams,
    build_kernel,
    collapsed_gaussian_logpdf,
    factor_covariance,
    gp_condition,
    gp_predict,
    single_index,
)
from .rng import GigParams, RandomStream
from .sampler import (
    ChainDraws,
    ChainState,
    Hyperparams,
    NumericFailure,
    SamplerConfig,
    run_chain,
)
from .simulate import SimSpec, run_replication_study

__all__ = [
    "MixtureConstants",
    "QuantileLevel",
    "ald_cdf",
    "ald_logpdf",
    "ald_sample",
    "check_loss",
    "mixture_constants",
    "NormalizedIndex",
    "PosteriorSummary",
    "acf",
    "effective_sample_size",
    "fitted_link",
    "mse_against_truth",
    "normalize_index",
    "summarize",
    "Dataset",
    "ingest_csv",
    "SingleIndexQuantileRegressor",
    "FactoredCovariance",
    "FactorizationError",
    "KernelParams",
    "build_kernel",
    "collapsed_gaussian_logpdf",
    "factor_covariance",
    "gp_condition",
    "gp_predict",
    "single_index",
    "GigParams",
    "RandomStream",
    "ChainDraws",
    "ChainState",
    "Hyperparams",
    "NumericFailure",
    "SamplerConfig",
    "run_chain",
    "SimSpec",
    "run_replication_study",
]
