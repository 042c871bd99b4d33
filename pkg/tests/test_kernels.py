import math

import numpy as np
import pytest

from mittag.config import EvalConfig
from mittag.errors import DomainError
from mittag.kernels import (
    KernelDensity,
    count_sign_changes,
    kernel_quad_mass,
    kernel_total_mass,
    kernel_value,
    laplace_transform,
)


def test_kernel_validation():
    with pytest.raises(DomainError):
        KernelDensity("f", 1.0)
    with pytest.raises(DomainError):
        KernelDensity("g", 1.2)
    with pytest.raises(DomainError):
        KernelDensity("h", 0.5)
    with pytest.raises(DomainError):
        KernelDensity("g_lambda", 0.7, beta=0.3, lam=1.0)  # needs alpha < beta
    with pytest.raises(DomainError):
        KernelDensity("g_lambda", 0.3, beta=0.7, lam=-1.0)
    with pytest.raises(DomainError):
        KernelDensity("f", 0.9999999)  # sin(pi alpha) degenerate
    with pytest.raises(DomainError):
        kernel_value(KernelDensity("g", 0.5), 0.0)


def test_half_parameter_collapse():
    # cos(pi/2) = 0 collapses both quadratic denominators
    for t in (0.2, 1.0, 3.7):
        expect = t**-0.5 / (math.pi * (1.0 + t))
        assert kernel_value(KernelDensity("f", 0.5), t) == pytest.approx(expect, rel=1e-14)
        assert kernel_value(KernelDensity("g", 0.5), t) == pytest.approx(expect, rel=1e-14)


def test_signed_kernel_above_one():
    # on (1,2) the sine prefactor makes the f kernel negative everywhere
    kd = KernelDensity("f", 1.5)
    assert all(kernel_value(kd, t) < 0.0 for t in (0.1, 1.0, 10.0))


def test_kernel_masses_quadrature_vs_closed_form():
    assert kernel_quad_mass(KernelDensity("g", 0.5)) == pytest.approx(1.0, abs=1e-10)
    assert kernel_quad_mass(KernelDensity("g", 0.85)) == pytest.approx(1.0, abs=1e-10)
    assert kernel_quad_mass(KernelDensity("h", 1.5)) == pytest.approx(1.0, abs=1e-9)
    assert kernel_quad_mass(KernelDensity("h", 1.2)) == pytest.approx(1.0, abs=1e-9)
    for a in (0.3, 0.5, 0.8):
        assert kernel_quad_mass(KernelDensity("f", a)) == pytest.approx(
            1.0 / a - 1.0, abs=1e-10
        )
    assert kernel_total_mass(KernelDensity("f", 1.5)) == pytest.approx(1.0 / 1.5 - 1.0)
    # the scaled two-parameter kernel is signed with total mass zero
    assert kernel_quad_mass(KernelDensity("g_lambda", 0.3, beta=0.7, lam=2.0)) == pytest.approx(
        0.0, abs=1e-9
    )


def test_self_reciprocal_identity():
    # g(1/t) = t^2 g(t), the change of variables behind the reciprocal fold
    for a in (0.2, 0.5, 0.9):
        kd = KernelDensity("g", a)
        for t in np.geomspace(0.01, 100.0, 17):
            lhs = kernel_value(kd, 1.0 / t)
            rhs = t * t * kernel_value(kd, t)
            assert lhs == pytest.approx(rhs, rel=1e-12)


def test_g_lambda_reproduces_the_transform_difference():
    # lam * LT(g_lambda) equals the difference of the two relaxation functions
    from mittag.mleval import MLParams, eval_ml

    a, b, lam = 0.3, 0.7, 2.0
    kd = KernelDensity("g_lambda", a, beta=b, lam=lam)
    for x in (0.3, 1.0, 4.0):
        lhs = lam * laplace_transform(kd, x)
        rhs = eval_ml(MLParams(a), -lam * x**a) - eval_ml(MLParams(b), -lam * x**b)
        assert lhs == pytest.approx(rhs, abs=3e-9)


def test_count_sign_changes_alzer_dominance():
    # f_alpha - f_beta stays positive for alpha < beta in (0,1)
    from mittag.kernels import kernel_callable

    fa = kernel_callable(KernelDensity("f", 0.3))
    fb = kernel_callable(KernelDensity("f", 0.6))
    rep = count_sign_changes(lambda t: float(fa(t) - fb(t)), 1e-4, 1e4, 1024)
    assert rep.count == 0
    assert rep.starting_sign == 1


def test_count_sign_changes_g_difference():
    from mittag.kernels import kernel_callable

    ga = kernel_callable(KernelDensity("g", 0.3))
    gb = kernel_callable(KernelDensity("g", 0.6))
    rep = count_sign_changes(lambda t: float(ga(t) - gb(t)), 1e-6, 1e6, 4096)
    assert rep.count <= 2
    assert rep.starting_sign == 1

    rep2 = count_sign_changes(lambda t: float(t * (gb(t) - ga(t))), 1e-6, 1e6, 4096)
    assert rep2.count == 2
    assert rep2.starting_sign == -1
    assert list(rep2.locations) == sorted(rep2.locations)


def test_count_sign_changes_validation():
    with pytest.raises(DomainError):
        count_sign_changes(math.sin, -1.0, 1.0, 128)
    with pytest.raises(DomainError):
        count_sign_changes(math.sin, 1.0, 2.0, 32)


def test_count_sign_changes_locates_roots():
    rep = count_sign_changes(lambda t: math.sin(t), 1.0, 10.0, 512)
    assert rep.count == 3
    assert rep.locations[0] == pytest.approx(math.pi, rel=1e-9)
    assert rep.locations[1] == pytest.approx(2.0 * math.pi, rel=1e-9)
    assert rep.locations[2] == pytest.approx(3.0 * math.pi, rel=1e-9)


def test_dead_band_flags_ambiguity():
    cfg = EvalConfig(abs_tol=0.5)
    rep = count_sign_changes(lambda t: 0.1 * math.sin(t), 1.0, 10.0, 256, cfg)
    assert rep.ambiguous
    assert rep.count == 0
