import math

import numpy as np
import pytest

from mittag.crossings import (
    ProbeGrid,
    find_mode_m,
    find_x_ab,
    find_x_ab_lambda,
    find_x_star,
    find_yz,
    probe_conjecture,
    xab_bracket,
)
from mittag.errors import DomainError
from mittag.gammaf import EULER_GAMMA, gamma
from mittag.mleval import MLParams, eval_ml, eval_ml_power

# golden values from an out-of-band mpmath bisection (200 iterations on the
# 40-digit series; independent of the package's evaluation paths)
GOLDEN_X_AB_03_07 = 0.65490945310837609441
GOLDEN_Y_03_07 = 0.034995890271428597012
GOLDEN_Z_03_07 = 9.2454670267973604732
GOLDEN_X_STAR_12_16 = 9.5729197301235379255
GOLDEN_MODE_X_05 = 0.82132424704328026871
GOLDEN_MODE_M_05 = 0.13835838788203281854


def test_x_ab_inside_bracket_and_below_one():
    res = find_x_ab(0.3, 0.7)
    lo, hi = xab_bracket(0.3, 0.7)
    assert res.certified
    assert lo < res.root < hi <= 1.0
    assert res.root == pytest.approx(GOLDEN_X_AB_03_07, rel=1e-10)
    # sign pattern: negative before, positive after
    fn = lambda x: eval_ml_power(0.3, x, -1) - eval_ml_power(0.7, x, -1)
    assert fn(res.root / 2.0) < 0.0
    assert fn(min(2.0 * res.root, 0.99 * 1e4)) > 0.0


def test_x_ab_domain():
    with pytest.raises(DomainError):
        find_x_ab(0.7, 0.3)
    with pytest.raises(DomainError):
        find_x_ab(0.3, 1.0)


def test_x_ab_small_parameter_limit():
    # roots approach e^(-euler_gamma) as both parameters shrink
    res = find_x_ab(0.01, 0.02)
    assert res.root == pytest.approx(math.exp(-EULER_GAMMA), rel=0.05)


def test_lambda_one_matches_plain():
    r1 = find_x_ab(0.3, 0.7)
    r2 = find_x_ab_lambda(0.3, 0.7, 1.0)
    assert abs(r1.root - r2.root) < 1e-10


def test_lambda_below_one_bound():
    res = find_x_ab_lambda(0.4, 0.6, 0.5)
    assert res.certified
    assert res.root <= 0.5 ** (-1.0 / 0.4)
    # sign structure around the root
    fn = lambda x: eval_ml(MLParams(0.4), -0.5 * x**0.4) - eval_ml(MLParams(0.6), -0.5 * x**0.6)
    assert fn(res.root * 0.5) < 0.0 < fn(res.root * 2.0)


def test_lambda_above_one_probe_value():
    res = find_x_ab_lambda(0.4, 0.6, 2.0)
    assert res.certified
    assert res.root <= 1.0  # conjectured; reported by the probe, holds here


def test_yz_ordering():
    y, z = find_yz(0.3, 0.7)
    mid = find_x_ab(0.3, 0.7).root
    assert y.certified and z.certified
    assert y.root < mid < z.root
    assert y.root == pytest.approx(GOLDEN_Y_03_07, rel=1e-9)
    assert z.root == pytest.approx(GOLDEN_Z_03_07, rel=1e-9)


def test_yz_limit_signs():
    # the density difference is negative at both ends of the axis
    a, b = 0.3, 0.7
    d = lambda x: x ** (b - 1.0) * eval_ml(MLParams(b, b), -(x**b)) - x ** (
        a - 1.0
    ) * eval_ml(MLParams(a, a), -(x**a))
    assert d(1e-4) < 0.0
    assert d(1e3) < 0.0


def test_x_star_lower_bound_and_golden():
    res = find_x_star(1.2, 1.6)
    assert res.certified
    assert res.root > find_x_ab(0.6, 0.8).root
    assert res.root == pytest.approx(GOLDEN_X_STAR_12_16, rel=1e-9)


def test_x_star_value_at_zero():
    # beta E_beta - alpha E_alpha starts at beta - alpha
    a, b = 1.2, 1.6
    h0 = b * eval_ml(MLParams(b), 0.0) - a * eval_ml(MLParams(a), 0.0)
    assert h0 == pytest.approx(b - a, rel=1e-14)


def test_x_star_domain():
    with pytest.raises(DomainError):
        find_x_star(0.5, 1.5)
    with pytest.raises(DomainError):
        find_x_star(1.6, 1.2)


def test_mode_bracket_and_golden():
    crossing, ext = find_mode_m(0.5)
    assert crossing.certified
    assert ext.argmax < 1.0
    assert ext.argmax == pytest.approx(GOLDEN_MODE_X_05, rel=1e-8)
    assert ext.value == pytest.approx(GOLDEN_MODE_M_05, rel=1e-9)
    assert 0.192744 * 0.5 <= ext.value <= gamma(1.0) / (2.0 * gamma(0.5) ** 2) < 0.25


def test_mode_small_alpha_quarter_ratio():
    _, ext = find_mode_m(0.02)
    assert ext.argmax < 1.0
    assert 0.21 <= ext.value / 0.02 <= 0.29


@pytest.mark.parametrize("alpha", [0.1, 0.35, 0.65, 0.9])
def test_mode_unimodality(alpha):
    _, ext = find_mode_m(alpha)
    f = lambda x: x * eval_ml(MLParams(alpha, alpha), -x)
    peak = f(ext.argmax)
    for x in (ext.argmax / 4.0, ext.argmax / 1.5, ext.argmax * 1.5, ext.argmax * 4.0):
        assert f(x) < peak
    assert peak < alpha / 2.0


def test_probe_known_ids_have_no_violations():
    small = ProbeGrid(alphas=tuple(round(0.1 * k, 1) for k in range(1, 10)))
    for cid in ("alpha_dec_Ea_minus1", "alpha_inc_Eaa_minus1"):
        rep = probe_conjecture(cid, small)
        assert rep.violations == []
        assert rep.min_margin > 0.0


def test_probe_lambda_root_bound():
    grid = ProbeGrid(pairs=((0.3, 0.7),), lambdas=(1.5, 2.0, 5.0))
    rep = probe_conjecture("lambda_gt1_root_le1", grid)
    assert rep.violations == []
    assert rep.min_margin > 0.0


def test_probe_stochastic_order():
    grid = ProbeGrid(n_samples=40_000, seed=99)
    rep = probe_conjecture("stoch_order_M_over_Gamma", grid)
    assert rep.violations == []


def test_probe_unknown_id():
    with pytest.raises(DomainError):
        probe_conjecture("not_a_conjecture")
