"""
베이지안 사후 추론 (MCMC)
"""
from svmc.inference.priors import InferenceError, Priors, PriorSupportViolation
from svmc.inference.sampler import (
    ChainConfig,
    ChainConfigError,
    InsufficientData,
    NonFiniteLikelihood,
    PosteriorChain,
    log_likelihood,
    measurement_log_likelihood,
    sample_chains,
    sample_posterior,
)
from svmc.inference.summary import EmptyChain, gelman_rubin, plug_in_params, posterior_summary

__all__ = [
    "InferenceError",
    "Priors",
    "PriorSupportViolation",
    "ChainConfig",
    "ChainConfigError",
    "InsufficientData",
    "NonFiniteLikelihood",
    "PosteriorChain",
    "log_likelihood",
    "measurement_log_likelihood",
    "sample_chains",
    "sample_posterior",
    "EmptyChain",
    "gelman_rubin",
    "plug_in_params",
    "posterior_summary",
]
