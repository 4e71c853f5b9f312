"""Trans-dimensional Hamiltonian Monte Carlo over program traces.

The compiled core exposes the samplers (NP-HMC, NP-DHMC, NP-RHMC, single-site
MH baselines, importance sampling), the benchmark models, and the MCMC
diagnostics. See the README for the model-authoring guide and the CLI.
"""

from nphmc._core import (
    Dataset3D,
    Dist1D,
    Model,
    default_spec_json,
    dpmm,
    dpmm_point_log_lik,
    ess_autocorr,
    ess_weighted,
    geometric,
    gmm,
    gmm_point_log_lik,
    importance_sample,
    kde,
    log_base_density,
    lppd,
    make_gmm_dataset,
    random_walk,
    run_chain,
    run_experiment,
    tvd_discrete,
    verify_experiment,
)

__all__ = [
    "Dataset3D",
    "Dist1D",
    "Model",
    "default_spec_json",
    "dpmm",
    "dpmm_point_log_lik",
    "ess_autocorr",
    "ess_weighted",
    "geometric",
    "gmm",
    "gmm_point_log_lik",
    "importance_sample",
    "kde",
    "log_base_density",
    "lppd",
    "make_gmm_dataset",
    "random_walk",
    "run_chain",
    "run_experiment",
    "tvd_discrete",
    "verify_experiment",
]

__version__ = "0.1.0"
