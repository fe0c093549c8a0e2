"""Multivariate fractional Ornstein-Uhlenbeck toolkit.

Model parameters for simulation and Monte Carlo use the same dictionaries as the
JSON config files read by the ``mfou`` command line tool.
"""

import json

import numpy as np

from ._mfou import (
    PairParams,
    ValidationError,
    coherence,
    coherence_ellipse,
    corr,
    cross_cov,
    cross_cov_series,
    damped_i_integral,
    fbm_cov,
    i_integral,
    low_freq_coeffs,
    mfbm_cross_cov,
    var_limit_high_freq,
    var_limit_low_freq,
    var_limit_supercritical,
    violations,
)
from . import _mfou

__all__ = [
    "PairParams",
    "ValidationError",
    "coherence",
    "coherence_ellipse",
    "corr",
    "cross_cov",
    "cross_cov_series",
    "damped_i_integral",
    "estimate_high_freq",
    "estimate_low_freq",
    "estimate_nu_high",
    "estimate_nu_low",
    "fbm_cov",
    "i_integral",
    "low_freq_coeffs",
    "mfbm_cross_cov",
    "pair_model",
    "predicted_rate",
    "run_experiment",
    "simulate",
    "var_limit_high_freq",
    "var_limit_low_freq",
    "var_limit_supercritical",
    "violations",
]


def pair_model(p):
    """Config-style parameter dict for a PairParams."""
    return {
        "d": 2,
        "H": [p.h1, p.h2],
        "alpha": [p.alpha1, p.alpha2],
        "nu": [p.nu1, p.nu2],
        "rho": [[1.0, p.rho], [p.rho, 1.0]],
        "eta": [[0.0, p.eta12], [-p.eta12, 0.0]],
    }


def _params_text(params):
    if isinstance(params, PairParams):
        params = pair_model(params)
    return json.dumps(params)


def simulate(params, n, delta=1.0, seed=1, scheme="exact", substeps=1):
    """Trajectory on t_k = k*delta, k = 0..n, as an array of shape (d, n + 1)."""
    return np.asarray(_mfou._simulate(_params_text(params), scheme, n, delta, seed, substeps))


def estimate_low_freq(y1, y2, params, s=1, delta=1.0, corr=False):
    return json.loads(_mfou._estimate_low_freq(y1, y2, params, s, delta, corr))


def estimate_high_freq(y1, y2, h1, h2, delta, nu1=1.0, nu2=1.0):
    return json.loads(_mfou._estimate_high_freq(y1, y2, h1, h2, nu1, nu2, delta))


def estimate_nu_low(y, alpha, h, s=1, delta=1.0):
    return json.loads(_mfou._estimate_nu_low(y, alpha, h, s, delta))["nu2"]


def estimate_nu_high(y, h, delta):
    return json.loads(_mfou._estimate_nu_high(y, h, delta))["nu2"]


def predicted_rate(hsum, process="mfou"):
    return json.loads(_mfou._predicted_rate(hsum, process))


def run_experiment(config, threads=0):
    """Run a montecarlo config dict; returns (summary dict, raw errors CSV text)."""
    summary, errors = _mfou._run_experiment(json.dumps(config), threads)
    return json.loads(summary), errors
