"""Kernels of the real-line integral representations, and sign-change counting.

Four kernel families appear, all rational in t^alpha (and t^beta):

  f   sin(pi a) t^(a-1) / (pi (t^(2a) - 2 cos(pi a) t^a + 1)),  a in (0,1) or (1,2)
  g   sin(pi a) t^(a-1) / (pi (t^(2a) + 2 cos(pi a) t^a + 1)),  a in (0,1)
  h   (-a sin(pi a)) t^a / (pi (t^(2a) - 2 cos(pi a) t^a + 1)), a in (1,2)
  g_lambda   the signed two-parameter kernel with scale lambda > 0

f and g satisfy k(1/t) = t^2 k(t), which lets every integral over (0, inf)
be folded onto (0, 1].  The substitution u = t^a turns the f/g Laplace
transforms into smooth integrals on (0, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy import integrate

from .config import DEFAULT_CONFIG, EvalConfig
from .errors import ConvergenceError, DomainError

# A kernel whose sin(pi*alpha) prefactor is below this is treated as
# degenerate (alpha too close to an integer for the representation).
SIN_DEGENERATE = 1e-6

_QUAD_KW = dict(epsabs=1e-14, epsrel=1e-12, limit=200)


@dataclass(frozen=True)
class KernelDensity:
    """Tagged description of one kernel; kind in {"f", "g", "h", "g_lambda"}."""

    kind: str
    alpha: float
    beta: Optional[float] = None
    lam: Optional[float] = None

    def __post_init__(self) -> None:
        a = self.alpha
        if self.kind == "f":
            if not (0.0 < a < 2.0 and a != 1.0):
                raise DomainError(f"f-kernel needs alpha in (0,1) or (1,2), got {a}")
        elif self.kind == "g":
            if not 0.0 < a < 1.0:
                raise DomainError(f"g-kernel needs alpha in (0,1), got {a}")
        elif self.kind == "h":
            if not 1.0 < a < 2.0:
                raise DomainError(f"h-kernel needs alpha in (1,2), got {a}")
        elif self.kind == "g_lambda":
            b, lam = self.beta, self.lam
            if b is None or lam is None:
                raise DomainError("g_lambda kernel needs beta and lam")
            if not (0.0 < a < b < 1.0):
                raise DomainError(f"g_lambda needs 0 < alpha < beta < 1, got ({a}, {b})")
            if not lam > 0.0:
                raise DomainError(f"g_lambda needs lam > 0, got {lam}")
        else:
            raise DomainError(f"unknown kernel kind {self.kind!r}")
        if abs(math.sin(math.pi * a)) < SIN_DEGENERATE:
            raise DomainError(
                f"kernel degenerates: |sin(pi*alpha)| < {SIN_DEGENERATE} at alpha={a}"
            )
        if self.kind == "g_lambda" and abs(math.sin(math.pi * self.beta)) < SIN_DEGENERATE:
            raise DomainError(
                f"kernel degenerates: |sin(pi*beta)| tiny at beta={self.beta}"
            )


def _f_kernel(alpha: float, t):
    s, c = math.sin(math.pi * alpha), math.cos(math.pi * alpha)
    ta = np.power(t, alpha)
    return s * np.power(t, alpha - 1.0) / (np.pi * (ta * ta - 2.0 * c * ta + 1.0))


def _g_kernel(alpha: float, t):
    s, c = math.sin(math.pi * alpha), math.cos(math.pi * alpha)
    ta = np.power(t, alpha)
    return s * np.power(t, alpha - 1.0) / (np.pi * (ta * ta + 2.0 * c * ta + 1.0))


def _h_kernel(alpha: float, t):
    s, c = math.sin(math.pi * alpha), math.cos(math.pi * alpha)
    ta = np.power(t, alpha)
    return -alpha * s * ta / (np.pi * (ta * ta - 2.0 * c * ta + 1.0))


def _g_lambda_kernel(alpha: float, beta: float, lam: float, t):
    # combining the two scaled relaxation kernels over a common denominator
    # gives the cross term 2 lam sin(pi(alpha-beta)) t^(alpha+beta); checked
    # against the defining Laplace-transform identity (and the total mass 0)
    sa, ca = math.sin(math.pi * alpha), math.cos(math.pi * alpha)
    sb, cb = math.sin(math.pi * beta), math.cos(math.pi * beta)
    sab = math.sin(math.pi * (alpha - beta))
    ta, tb = np.power(t, alpha), np.power(t, beta)
    lam2 = lam * lam
    num = sa * ta * (lam2 + tb * tb) - sb * tb * (lam2 + ta * ta) + 2.0 * lam * sab * ta * tb
    den = (
        np.pi
        * t
        * (ta * ta + 2.0 * lam * ca * ta + lam2)
        * (tb * tb + 2.0 * lam * cb * tb + lam2)
    )
    return num / den


def kernel_value(kd: KernelDensity, t: float) -> float:
    """Evaluate the kernel described by ``kd`` at t > 0."""
    if not t > 0.0:
        raise DomainError(f"kernel argument must be > 0, got {t}")
    if kd.kind == "f":
        return float(_f_kernel(kd.alpha, t))
    if kd.kind == "g":
        return float(_g_kernel(kd.alpha, t))
    if kd.kind == "h":
        return float(_h_kernel(kd.alpha, t))
    return float(_g_lambda_kernel(kd.alpha, kd.beta, kd.lam, t))


def kernel_callable(kd: KernelDensity) -> Callable[[np.ndarray], np.ndarray]:
    """Vectorised kernel as a plain function of t."""
    if kd.kind == "f":
        return lambda t: _f_kernel(kd.alpha, t)
    if kd.kind == "g":
        return lambda t: _g_kernel(kd.alpha, t)
    if kd.kind == "h":
        return lambda t: _h_kernel(kd.alpha, t)
    return lambda t: _g_lambda_kernel(kd.alpha, kd.beta, kd.lam, t)


def kernel_total_mass(kd: KernelDensity) -> float:
    """Closed-form integral of the kernel over (0, inf).

    g and h are probability densities (mass 1); f has mass 1/alpha - 1
    (negative on (1,2)); g_lambda is a signed kernel with total mass 0.
    """
    if kd.kind == "f":
        return 1.0 / kd.alpha - 1.0
    if kd.kind in ("g", "h"):
        return 1.0
    return 0.0


def kernel_quad_mass(kd: KernelDensity, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """Integral of the kernel over (0, inf) by quadrature (for cross-checks)."""
    return laplace_transform(kd, 0.0, cfg)


# ---------------------------------------------------------------------------
# Laplace transforms  int_0^inf exp(-x t) k(t) dt
# ---------------------------------------------------------------------------


def layer_pieces(alpha: float, x: float) -> list:
    """Breakpoints on [0, 1] resolving the e^(-x u^(1/alpha)) boundary layer.

    The factor turns over at u* = x^(-alpha) and is dead beyond ~100 u*;
    without explicit breakpoints an adaptive rule can sample right past the
    spike and accept 0.
    """
    if x <= 10.0:
        return [0.0, 1.0]
    u_star = x ** (-alpha)
    pts = [0.0]
    for mult in (1.0, 10.0, 100.0):
        u = mult * u_star
        if u < 0.5:
            pts.append(u)
    pts.append(1.0)
    return pts


def _lt_fg_smooth(alpha: float, x: float, plus: bool) -> float:
    """Laplace transform of the f (plus=False) or g (plus=True) kernel.

    With u = t^alpha and the reciprocal fold, the transform becomes

        sin(pi a)/(pi a) * int_0^1 [e^(-x u^(1/a)) + e^(-x u^(-1/a))]
                                   / (u^2 +- 2 cos(pi a) u + 1) du,

    a smooth integrand on (0, 1].
    """
    s, c = math.sin(math.pi * alpha), math.cos(math.pi * alpha)
    if plus:
        c = -c
    inv_a = 1.0 / alpha

    def integrand(u: float) -> float:
        if u <= 0.0:
            return 2.0 if x == 0.0 else 1.0
        t_small = u**inv_a
        dec = math.exp(-x * t_small) if x * t_small < 745.0 else 0.0
        arg = x / t_small
        grow = math.exp(-arg) if arg < 745.0 else 0.0
        return (dec + grow) / (u * u - 2.0 * c * u + 1.0)

    total = 0.0
    pieces = layer_pieces(alpha, x)
    for lo, hi in zip(pieces[:-1], pieces[1:]):
        val, _ = integrate.quad(integrand, lo, hi, **_QUAD_KW)
        total += val
    return s / (math.pi * alpha) * total


def laplace_f(alpha: float, x: float) -> float:
    """int_0^inf e^(-x t) f_alpha(t) dt for alpha in (0,1) or (1,2), x >= 0."""
    return _lt_fg_smooth(alpha, x, plus=False)


def laplace_g(alpha: float, x: float) -> float:
    """int_0^inf e^(-x t) g_alpha(t) dt for alpha in (0,1), x >= 0."""
    return _lt_fg_smooth(alpha, x, plus=True)


def laplace_transform(
    kd: KernelDensity, x: float, cfg: EvalConfig = DEFAULT_CONFIG
) -> float:
    """Laplace transform of any supported kernel at x >= 0.

    f and g go through the smooth u = t^alpha form; h and g_lambda use the
    generic reciprocal fold of the t-integral.
    """
    if x < 0.0:
        raise DomainError(f"laplace_transform needs x >= 0, got {x}")
    if kd.kind == "f":
        return laplace_f(kd.alpha, x)
    if kd.kind == "g":
        return laplace_g(kd.alpha, x)
    k = kernel_callable(kd)
    return folded_laplace(k, x)


def folded_laplace(k: Callable, x: float) -> float:
    """int_0^inf e^(-x t) k(t) dt as int_0^1 [e^(-xt) k(t) + e^(-x/t) k(1/t)/t^2] dt."""

    def integrand(t):
        with np.errstate(over="ignore", under="ignore"):
            head = np.exp(-x * t) * k(t)
            tail = np.where(t > 0.0, np.exp(-x / np.maximum(t, 1e-320)) * k(1.0 / np.maximum(t, 1e-320)) / np.maximum(t, 1e-320) ** 2, 0.0)
        return head + tail

    val, _ = integrate.quad(integrand, 0.0, 1.0, **_QUAD_KW)
    return float(val)


# ---------------------------------------------------------------------------
# Sign-change counting on a geometric grid with bisection refinement
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SignChangeReport:
    count: int
    locations: tuple
    starting_sign: int
    ambiguous: bool = False

    def __post_init__(self) -> None:
        if self.count != len(self.locations):
            raise DomainError("count must equal the number of locations")
        if any(b <= a for a, b in zip(self.locations, self.locations[1:])):
            raise DomainError("locations must be strictly increasing")


def count_sign_changes(
    fn: Callable[[float], float],
    t_lo: float,
    t_hi: float,
    grid_size: int = 4096,
    cfg: EvalConfig = DEFAULT_CONFIG,
) -> SignChangeReport:
    """Count strict sign changes of ``fn`` on [t_lo, t_hi].

    Samples a geometric grid, ignores values inside the +-abs_tol dead band,
    and refines each detected bracket by bisection.  A run of dead-band
    values spanning a whole grid cell flags the report as ambiguous.
    """
    if not (0.0 < t_lo < t_hi):
        raise DomainError(f"need 0 < t_lo < t_hi, got ({t_lo}, {t_hi})")
    if grid_size < 64:
        raise DomainError(f"grid_size must be >= 64, got {grid_size}")

    grid = np.geomspace(t_lo, t_hi, grid_size)
    vals = np.array([fn(float(t)) for t in grid], dtype=float)
    if not np.all(np.isfinite(vals)):
        bad = grid[~np.isfinite(vals)][0]
        raise ConvergenceError(f"function evaluation failed near t={bad:.6g}")

    dead = cfg.abs_tol
    signs = np.zeros(grid_size, dtype=int)
    signs[vals > dead] = 1
    signs[vals < -dead] = -1

    ambiguous = False
    nz = np.nonzero(signs)[0]
    if len(nz) == 0:
        return SignChangeReport(0, (), 0, ambiguous=True)
    # whole grid cells stuck in the dead band => ambiguous tangency
    if np.any(np.diff(nz) > 2):
        ambiguous = True

    starting_sign = int(signs[0]) if signs[0] != 0 else int(signs[nz[0]])

    locations = []
    prev_idx = nz[0]
    for idx in nz[1:]:
        if signs[idx] != signs[prev_idx]:
            a, b = float(grid[prev_idx]), float(grid[idx])
            fa = float(vals[prev_idx])
            for _ in range(80):
                mid = math.sqrt(a * b)
                fm = fn(mid)
                if (fm > 0.0) == (fa > 0.0):
                    a, fa = mid, fm
                else:
                    b = mid
                if b - a <= 1e-12 * b:
                    break
            locations.append(math.sqrt(a * b))
        prev_idx = idx

    return SignChangeReport(
        count=len(locations),
        locations=tuple(locations),
        starting_sign=starting_sign,
        ambiguous=ambiguous,
    )
