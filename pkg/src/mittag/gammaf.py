"""Gamma-family evaluators every other module consumes.

All gamma arithmetic is done in log space so that quantities like
Gamma(1 + 25 n) never overflow before they are combined.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sp

from .config import DEFAULT_CONFIG, EvalConfig
from .errors import DomainError, EvaluationOverflow

LOG_FLOAT_MAX = math.log(np.finfo(float).max)  # ~709.78

EULER_GAMMA = float(np.euler_gamma)


@dataclass(frozen=True)
class GammaValue:
    """Gamma(x) stored as (log |Gamma(x)|, sign)."""

    log_abs: float
    sign: int

    @property
    def value(self) -> float:
        if self.log_abs > LOG_FLOAT_MAX:
            raise EvaluationOverflow(
                f"Gamma value exp({self.log_abs:.3g}) exceeds the floating range"
            )
        return self.sign * math.exp(self.log_abs)


def _check_not_pole(x: float) -> None:
    if not math.isfinite(x):
        raise DomainError(f"gamma argument must be finite, got {x}")
    if x <= 0.0 and x == math.floor(x):
        raise DomainError(f"gamma pole at non-positive integer x={x}")


def ln_gamma(x: float) -> GammaValue:
    """log |Gamma(x)| with the sign of Gamma(x), for real non-pole x."""
    _check_not_pole(x)
    return GammaValue(log_abs=float(sp.gammaln(x)), sign=int(sp.gammasgn(x)))


def gamma(x: float) -> float:
    """Gamma(x) as a float; raises on poles and on overflow."""
    return ln_gamma(x).value


def digamma(x: float) -> float:
    """psi(x) for x > 0."""
    if not (x > 0.0 and math.isfinite(x)):
        raise DomainError(f"digamma requires x > 0, got {x}")
    return float(sp.psi(x))


def pochhammer_ratio(beta: float, alpha: float) -> float:
    """Gamma(alpha + beta) / Gamma(beta), computed in log space.

    Strictly increasing in beta for fixed alpha > 0 (log-convexity of Gamma).
    """
    if not (beta > 0.0 and math.isfinite(beta)):
        raise DomainError(f"pochhammer_ratio requires beta > 0, got {beta}")
    if not (alpha > 0.0 and math.isfinite(alpha)):
        raise DomainError(f"pochhammer_ratio requires alpha > 0, got {alpha}")
    log_ratio = float(sp.gammaln(alpha + beta) - sp.gammaln(beta))
    if log_ratio > LOG_FLOAT_MAX:
        raise EvaluationOverflow(
            f"pochhammer_ratio({beta}, {alpha}) = exp({log_ratio:.3g}) overflows"
        )
    return math.exp(log_ratio)


@functools.lru_cache(maxsize=1)
def gamma_min_on_positive_axis(cfg: EvalConfig = DEFAULT_CONFIG) -> tuple[float, float]:
    """(beta0, Gamma(1 + beta0)) where beta0 minimises Gamma(1 + b) on (0, inf).

    beta0 solves psi(1 + b) = 0; bisection over the bracket [0.4, 0.5].
    """
    lo, hi = 0.4, 0.5
    flo = digamma(1.0 + lo)
    fhi = digamma(1.0 + hi)
    if not (flo < 0.0 < fhi):
        raise DomainError("digamma bracket [0.4, 0.5] lost its sign change")
    for _ in range(max(cfg.max_iter, 80)):
        mid = 0.5 * (lo + hi)
        fm = digamma(1.0 + mid)
        if fm == 0.0:
            lo = hi = mid
            break
        if fm < 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-15:
            break
    beta0 = 0.5 * (lo + hi)
    return beta0, gamma(1.0 + beta0)
