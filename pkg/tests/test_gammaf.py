import math

import numpy as np
import pytest

from mittag.errors import DomainError, EvaluationOverflow
from mittag.gammaf import (
    EULER_GAMMA,
    digamma,
    gamma,
    gamma_min_on_positive_axis,
    ln_gamma,
    pochhammer_ratio,
)

from oracles import bisect, digamma_series


def test_ln_gamma_known_points():
    assert ln_gamma(1.0).log_abs == pytest.approx(0.0, abs=1e-14)
    assert ln_gamma(1.0).sign == 1
    assert ln_gamma(0.5).log_abs == pytest.approx(math.log(math.sqrt(math.pi)), rel=1e-14)
    # reflection: Gamma(-1/2) = -2 sqrt(pi)
    g = ln_gamma(-0.5)
    assert g.sign == -1
    assert g.log_abs == pytest.approx(math.log(2.0 * math.sqrt(math.pi)), rel=1e-14)


def test_ln_gamma_pole_and_overflow():
    with pytest.raises(DomainError):
        ln_gamma(0.0)
    with pytest.raises(DomainError):
        ln_gamma(-3.0)
    with pytest.raises(EvaluationOverflow):
        ln_gamma(200.0).value  # Gamma(200) ~ 1e372


def test_gamma_recurrence_on_grid():
    for x in np.linspace(0.1, 30.0, 60):
        assert gamma(x + 1.0) == pytest.approx(x * gamma(x), rel=1e-12)


def test_gamma_reflection_on_grid():
    for x in np.linspace(0.05, 0.95, 19):
        lhs = gamma(x) * gamma(1.0 - x)
        assert lhs == pytest.approx(math.pi / math.sin(math.pi * x), rel=1e-12)


def test_digamma_special_values():
    assert digamma(1.0) == pytest.approx(-EULER_GAMMA, rel=1e-13)
    assert digamma(2.0) == pytest.approx(1.0 - EULER_GAMMA, rel=1e-13)
    closed = 2.0 - EULER_GAMMA - 2.0 * math.log(2.0)
    assert digamma(1.5) == pytest.approx(closed, rel=1e-13)


def test_digamma_half_integer_against_series_oracle():
    # the series partial sum converges like z/N; 1e6 terms pin ~5e-7
    closed = 2.0 - EULER_GAMMA - 2.0 * math.log(2.0)
    oracle = digamma_series(1.5, 10**6)
    assert abs(oracle - closed) < 1e-6
    assert abs(digamma(1.5) - oracle) < 1e-6


def test_digamma_series_identity_on_grid():
    # the partial sum's tail is ~z/N with z = x here
    terms = 200000
    for x in (0.3, 1.0, 3.7, 12.0, 50.0):
        tail = 1.5 * x / terms + 1e-9
        assert digamma(1.0 + x) == pytest.approx(digamma_series(1.0 + x, terms), abs=tail)


def test_digamma_domain_and_monotonicity():
    with pytest.raises(DomainError):
        digamma(0.0)
    with pytest.raises(DomainError):
        digamma(-1.5)
    grid = np.geomspace(0.05, 80.0, 100)
    vals = [digamma(float(x)) for x in grid]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_pochhammer_ratio_values():
    assert pochhammer_ratio(1.0, 1.0) == pytest.approx(1.0, rel=1e-14)
    assert pochhammer_ratio(1.0, 0.5) == pytest.approx(math.sqrt(math.pi) / 2.0, rel=1e-13)
    assert pochhammer_ratio(3.0, 2.0) == pytest.approx(12.0, rel=1e-13)


def test_pochhammer_ratio_increasing_in_beta():
    for alpha in (0.3, 0.7, 1.5):
        betas = np.geomspace(0.1, 150.0, 60)
        vals = [pochhammer_ratio(float(b), alpha) for b in betas]
        assert all(b > a for a, b in zip(vals, vals[1:]))


def test_pochhammer_overflow_signalled():
    with pytest.raises(EvaluationOverflow):
        pochhammer_ratio(1.0, 180.0)


def test_gamma_minimum_location():
    beta0, value = gamma_min_on_positive_axis()
    assert beta0 == pytest.approx(0.46163, abs=1e-5)
    assert value < 1.0
    assert abs(digamma(1.0 + beta0)) < 1e-12
    # independent bisection oracle for the digamma root
    oracle = bisect(lambda b: digamma(1.0 + b), 0.4, 0.5)
    assert beta0 == pytest.approx(oracle, abs=1e-13)
