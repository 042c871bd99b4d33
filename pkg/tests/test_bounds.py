import math

import numpy as np
import pytest

from mittag.bounds import BoundKind, envelope, generalized_log, sweep_check
from mittag.errors import DomainError
from mittag.gammaf import gamma, pochhammer_ratio
from mittag.mleval import MLParams, eval_ml_rescaled

from oracles import erfc_cf


def test_unif_envelope_at_one():
    env = envelope(BoundKind.UNIF, 0.5, x=1.0)
    assert env.lo == pytest.approx(1.0 / (1.0 + gamma(0.5)), rel=1e-13)
    assert env.hi == pytest.approx(1.0 / (1.0 + 1.0 / gamma(1.5)), rel=1e-13)
    assert env.value == pytest.approx(math.e * erfc_cf(1.0), rel=1e-12)
    assert env.holds


def test_unif_hypotheses():
    with pytest.raises(DomainError):
        envelope(BoundKind.UNIF, 1.2, x=1.0)
    with pytest.raises(DomainError):
        envelope(BoundKind.UNIF, 0.5, x=-1.0)


def test_bind_trivial_at_zero():
    env = envelope(BoundKind.BIND, 0.3, x=0.0)
    assert env.lo == env.hi == 1.0
    assert env.value == pytest.approx(1.0, rel=1e-12)


def test_bind_upper_goes_infinite():
    env = envelope(BoundKind.BIND, 0.3, x=2.5)
    assert env.hi == math.inf
    assert env.holds


def test_bind2_negative_axis_only():
    env = envelope(BoundKind.BIND2, 0.4, x=-5.0)
    assert env.holds
    with pytest.raises(DomainError):
        envelope(BoundKind.BIND2, 0.4, x=0.5)


def test_rigid_ordering():
    env = envelope(BoundKind.RIGID, 0.3, beta=0.7, x=2.0)
    assert 0.0 < env.lo < env.value < env.hi == pytest.approx(0.7)


def test_ksb_envelope():
    env = envelope(BoundKind.KSB, 0.5, beta=2.0, x=-3.0)
    assert env.holds
    assert env.hi == pytest.approx(0.25)
    env = envelope(BoundKind.KSB, 0.5, beta=2.0, x=0.5)
    assert env.lo == 0.0  # the hyperbolic minorant is a negative-axis statement
    assert env.value <= env.hi


def test_bs_bi_envelope_uses_the_mode():
    env = envelope(BoundKind.BS_BI, 0.5)
    assert env.lo >= 0.192744 * 0.5 - 1e-12
    assert env.hi == pytest.approx(gamma(1.0) / (2.0 * gamma(0.5) ** 2), rel=1e-13)
    assert env.hi < 0.25
    assert env.holds


def test_extremal_limit_small_alpha():
    # the rescaled extremal member approaches (1 - x/2)^(-2)
    for x in (-2.0, -0.5, 0.5):
        v = eval_ml_rescaled(MLParams(0.01, 0.01), pochhammer_ratio(0.01, 0.01) * x)
        assert v == pytest.approx((1.0 - 0.5 * x) ** -2.0, rel=0.02)


def test_generalized_log_order_one_is_log():
    assert generalized_log(1.0, 1.0, math.e) == pytest.approx(1.0, rel=1e-14)
    assert generalized_log(1.0, 1.0, 1.0) == 0.0


def test_generalized_log_fixed_point_at_one():
    for a, b in [(0.5, 0.5), (0.3, 1.0), (0.7, 2.5)]:
        assert generalized_log(a, b, 1.0) == 0.0


def test_generalized_log_round_trip():
    pairs = [(0.5, 0.5), (0.3, 0.9), (0.7, 3.0), (0.9, 5.5), (0.4, 0.7), (0.6, 40.0)]
    for a, b in pairs:
        for t in np.linspace(-10.0, 5.0, 8):
            y = eval_ml_rescaled(MLParams(a, b), float(t))
            assert generalized_log(a, b, y) == pytest.approx(float(t), abs=1e-8)


def test_generalized_log_guards():
    with pytest.raises(DomainError):
        generalized_log(0.5, 0.5, -1.0)
    with pytest.raises(DomainError):
        generalized_log(0.5, 0.3, 2.0)  # beta below alpha
    with pytest.raises(DomainError):
        generalized_log(1.5, 2.0, 2.0)


def test_generalized_log_small_alpha_limit():
    # (Gamma(a)/Gamma(2a)) log_{a,a}(1+x) approaches 2(1 - 1/sqrt(1+x))
    v = generalized_log(0.01, 0.01, 4.0) / pochhammer_ratio(0.01, 0.01)
    assert v == pytest.approx(2.0 * (1.0 - 0.5), rel=0.02)


def test_sandwich_envelope():
    env = envelope(BoundKind.GEN_LOG_SANDWICH, 0.3, beta=0.8, x=3.0)
    assert env.lo == pytest.approx(0.75)
    assert env.hi == pytest.approx(math.log(4.0))
    assert env.holds


def test_sweeps_have_no_violations():
    r = sweep_check(
        BoundKind.UNIF,
        alphas=np.arange(0.1, 0.95, 0.1),
        xs=np.geomspace(0.01, 100.0, 12),
    )
    assert r.violations == ()
    r = sweep_check(
        BoundKind.UNIF1,
        alphas=[0.2, 0.4, 0.6],
        betas=[0.5, 0.7, 0.9],
        xs=np.geomspace(0.01, 50.0, 10),
    )
    assert r.violations == ()
    r = sweep_check(BoundKind.BIND2, alphas=[0.2, 0.5, 0.8], xs=np.linspace(-50.0, -0.01, 11))
    assert r.violations == ()


def test_unif_upper_slack_shrinks_as_alpha_drops():
    # the hyperbolic ceiling is approached from below as the order vanishes
    x = 2.0
    slack_small = envelope(BoundKind.UNIF1, 0.05, beta=0.5, x=x).slack_hi
    slack_large = envelope(BoundKind.UNIF1, 0.5, beta=0.9, x=x).slack_hi
    assert slack_small < slack_large


def test_monotone_target_spot_check():
    # the inversion target increases across a sampled span
    vals = [eval_ml_rescaled(MLParams(0.4, 1.3), t) for t in np.linspace(-5, 2, 30)]
    assert all(b > a for a, b in zip(vals, vals[1:]))
