import math

import numpy as np
import pytest

import mfou

FIG1 = mfou.PairParams(h1=0.1, h2=0.2, alpha1=0.5, alpha2=0.5, nu1=1.0, nu2=1.0, rho=0.5, eta12=0.2)


def test_univariate_variance_closed_form():
    p = mfou.PairParams(h1=0.25, h2=0.25, alpha1=1.0, alpha2=1.0, rho=1.0)
    assert mfou.cross_cov(p, 0, 0, 0.0) == pytest.approx(math.sqrt(math.pi) / 4, rel=1e-13)


def test_kernel_orientation_and_series():
    assert mfou.cross_cov(FIG1, 0, 1, -1.5) == mfou.cross_cov(FIG1, 1, 0, 1.5)
    series = mfou.cross_cov_series(FIG1, 0, 1, 0.5, 20)
    assert series.shape == (21,)
    assert series[4] == pytest.approx(mfou.cross_cov(FIG1, 0, 1, 2.0), rel=1e-11)


def test_exact_inversion():
    c = mfou.low_freq_coeffs(FIG1, 1)
    r0 = mfou.cross_cov(FIG1, 0, 1, 0.0)
    rp = mfou.cross_cov(FIG1, 0, 1, 1.0)
    rm = mfou.cross_cov(FIG1, 1, 0, 1.0)
    assert c["a1"] * r0 + c["a2"] * rp + c["a3"] * rm == pytest.approx(0.5, abs=1e-8)
    assert c["b1"] * r0 + c["b2"] * rp + c["b3"] * rm == pytest.approx(0.2, abs=1e-8)


def test_validation_errors():
    bad = mfou.PairParams(h1=0.1, h2=0.2, alpha1=0.5, alpha2=0.5, rho=5.0)
    assert mfou.violations(bad)
    with pytest.raises(ValueError):
        mfou.cross_cov(bad, 0, 1, 1.0)
    with pytest.raises(ValueError):
        mfou.simulate(mfou.pair_model(FIG1), 10, scheme="bogus")


def test_simulate_and_estimate():
    y = mfou.simulate(FIG1, 400, delta=1.0, seed=7)
    assert y.shape == (2, 401)
    again = mfou.simulate(mfou.pair_model(FIG1), 400, delta=1.0, seed=7)
    assert np.array_equal(y, again)
    est = mfou.estimate_low_freq(y[0], y[1], FIG1)
    assert abs(est["rho"] - 0.5) < 0.5
    assert math.isfinite(est["eta"])
    hf = mfou.estimate_high_freq(y[0], y[1], 0.1, 0.2, delta=1.0)
    assert math.isfinite(hf["rho"])


def test_volatility_estimators():
    p = mfou.PairParams(h1=0.3, h2=0.3, alpha1=0.5, alpha2=0.5, nu1=1.7, nu2=1.7, rho=1.0)
    y = mfou.simulate(p, 400, delta=0.05, seed=3)[0]
    nu2 = mfou.estimate_nu_high(y, 0.3, 0.05)
    rho = mfou.estimate_high_freq(y, y, 0.3, 0.3, delta=0.05, nu1=1.7, nu2=1.7)["rho"]
    assert nu2 == pytest.approx(1.7**2 * rho, rel=1e-14)
    assert 0 < mfou.estimate_nu_low(y, 0.5, 0.3, delta=0.05)


def test_rates_and_limits():
    assert mfou.predicted_rate(1.7) == {"exponent": pytest.approx(0.3), "log_correction": False,
                                        "regime": "non-gaussian"}
    assert mfou.var_limit_low_freq(FIG1) == pytest.approx(3.39923, rel=1e-4)
    assert mfou.var_limit_high_freq(0.2, 0.3, 0.5, 0.2) == pytest.approx(1.45892, rel=1e-4)
    with pytest.raises(ValueError):
        mfou.var_limit_low_freq(mfou.PairParams(h1=0.8, h2=0.9, alpha1=0.5, alpha2=0.5, rho=0.5))


def test_run_experiment_is_deterministic():
    config = {
        "params": mfou.pair_model(FIG1),
        "n_ladder": [20, 40, 80],
        "replicates": 5,
        "estimator": "low_freq_cov",
        "seed": 3,
    }
    a, errors = mfou.run_experiment(config, threads=1)
    b, _ = mfou.run_experiment(config, threads=2)
    assert a == b
    assert errors.startswith("n,replicate,estimand,error\n")
    assert set(a["ladder"]) == {"rho", "eta"}
