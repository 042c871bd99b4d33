"""Two-sided bound envelopes for the Mittag-Leffler family, and generalized
logarithms by monotone inversion of x -> Gamma(b) E_{a,b}(x).

Upper bounds of the (1-x)+ type return +inf beyond their pole instead of
raising; an infinite bound is a statement, not an error.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import optimize
from scipy import special as sp

from .config import DEFAULT_CONFIG, EvalConfig
from .errors import BracketError, ConvergenceError, DomainError, EvaluationOverflow
from .gammaf import gamma, pochhammer_ratio
from .mleval import MLParams, Method, eval_ml, eval_ml_rescaled, residual_G

RESCALED_MODE_LOWER_FACTOR = 0.192744  # minimum of the mode's lower-bound profile


class BoundKind(enum.Enum):
    UNIF = "unif"
    UNIF1 = "unif1"
    RIGID = "rigid"
    KSB = "ksb"
    BIND = "bind"
    BIND2 = "bind2"
    BS_BI = "bs_bi"
    GEN_LOG_SANDWICH = "gen_log_sandwich"


@dataclass(frozen=True)
class Envelope:
    lo: float
    hi: float
    value: float

    @property
    def slack_lo(self) -> float:
        return self.value - self.lo

    @property
    def slack_hi(self) -> float:
        return self.hi - self.value

    @property
    def holds(self) -> bool:
        return self.slack_lo >= -1e-9 and self.slack_hi >= -1e-9


def _plus_pow(base: float, power: float) -> float:
    """(base)_+ ** power with the +inf convention past the pole."""
    if base <= 0.0:
        return math.inf
    return base**power


def _log_ksb_lower_coeff(alpha: float, beta: float) -> float:
    # Gamma(alpha+beta) Gamma(beta-alpha) / Gamma(beta)^2, in log space
    return float(
        sp.gammaln(alpha + beta) + sp.gammaln(beta - alpha) - 2.0 * sp.gammaln(beta)
    )


def envelope(
    kind: BoundKind,
    alpha: float,
    beta: Optional[float] = None,
    x: Optional[float] = None,
    cfg: EvalConfig = DEFAULT_CONFIG,
) -> Envelope:
    """Evaluate one bound pair (lo, value, hi) at the given parameters."""
    if kind == BoundKind.UNIF:
        # hyperbolic pair around E_a(-x), a in (0,1), x >= 0
        if not (0.0 < alpha < 1.0):
            raise DomainError(f"unif needs alpha in (0,1), got {alpha}")
        if x is None or x < 0.0:
            raise DomainError("unif needs x >= 0")
        value = eval_ml(MLParams(alpha, 1.0), -x, Method.AUTO, cfg)
        lo = 1.0 / (1.0 + gamma(1.0 - alpha) * x)
        hi = 1.0 / (1.0 + x / gamma(1.0 + alpha))
        return Envelope(lo, hi, value)

    if kind == BoundKind.UNIF1:
        # e^-x <= E_b(-G(1+b)x) <= E_a(-G(1+a)x) <= 1/(1+x)
        if beta is None or not (0.0 < alpha < beta < 1.0):
            raise DomainError(f"unif1 needs 0 < alpha < beta < 1, got ({alpha}, {beta})")
        if x is None or x < 0.0:
            raise DomainError("unif1 needs x >= 0")
        value = eval_ml(MLParams(alpha, 1.0), -gamma(1.0 + alpha) * x, Method.AUTO, cfg)
        return Envelope(math.exp(-x), 1.0 / (1.0 + x), value)

    if kind == BoundKind.RIGID:
        # 0 < G_b(x) < G_a(x) < 1 - alpha on x > 0 for a < b in (0,1)
        if not (0.0 < alpha < 1.0):
            raise DomainError(f"rigid needs alpha in (0,1), got {alpha}")
        if x is None or not x > 0.0:
            raise DomainError("rigid needs x > 0")
        value = residual_G(alpha, x, cfg)
        lo = residual_G(beta, x, cfg) if beta is not None else 0.0
        return Envelope(lo, 1.0 - alpha, value)

    if kind == BoundKind.KSB:
        # the hyperbolic pair around Gamma(b) E_{a,b}((b)_a x); the lower
        # branch is stated for x <= 0 (vacuous 0 is used on (0,1))
        if beta is None or not (0.0 < alpha <= 1.0 and beta >= alpha):
            raise DomainError(f"ksb needs 0 < alpha <= 1 <= ... beta >= alpha, got ({alpha}, {beta})")
        if x is None or not x < 1.0:
            raise DomainError("ksb needs x < 1 for the finite upper bound")
        arg = pochhammer_ratio(beta, alpha) * x
        value = eval_ml_rescaled(MLParams(alpha, beta), arg, Method.AUTO, cfg)
        hi = 1.0 / (1.0 - x)
        if x <= 0.0 and beta > alpha:
            lo = 1.0 / (1.0 - math.exp(_log_ksb_lower_coeff(alpha, beta)) * x)
        else:
            lo = 0.0
        return Envelope(lo, hi, value)

    if kind == BoundKind.BIND:
        # e^x <= Gamma(a) E_{a,a}((G(2a)/G(a)) x) <= 1/(1 - x/2)_+^2
        if not (0.0 < alpha < 1.0):
            raise DomainError(f"bind needs alpha in (0,1), got {alpha}")
        if x is None:
            raise DomainError("bind needs x")
        arg = pochhammer_ratio(alpha, alpha) * x
        value = eval_ml_rescaled(MLParams(alpha, alpha), arg, Method.AUTO, cfg)
        lo = math.exp(x) if x < 700.0 else math.inf
        hi = _plus_pow(1.0 - 0.5 * x, -2.0)
        return Envelope(lo, hi, value)

    if kind == BoundKind.BIND2:
        # sharper-for-large-negative lower bound, x <= 0 only
        if not (0.0 < alpha < 1.0):
            raise DomainError(f"bind2 needs alpha in (0,1), got {alpha}")
        if x is None or x > 0.0:
            raise DomainError("bind2 holds for x <= 0 only")
        arg = pochhammer_ratio(alpha, alpha) * x
        value = eval_ml_rescaled(MLParams(alpha, alpha), arg, Method.AUTO, cfg)
        coeff = math.sqrt(gamma(1.0 - alpha) / gamma(1.0 + alpha)) * pochhammer_ratio(
            alpha, alpha
        )
        lo = 1.0 / (1.0 - coeff * x) ** 2
        hi = _plus_pow(1.0 - 0.5 * x, -2.0)
        return Envelope(lo, hi, value)

    if kind == BoundKind.BS_BI:
        # bracket for the mode maximum of x E_{a,a}(-x)
        if not (0.0 < alpha < 1.0):
            raise DomainError(f"bs_bi needs alpha in (0,1), got {alpha}")
        from .crossings import find_mode_m

        _, ext = find_mode_m(alpha, cfg)
        profile = max(
            math.exp(-gamma(alpha) / gamma(2.0 * alpha)) / gamma(alpha + 1.0),
            (1.0 / (math.sqrt(gamma(1.0 + alpha)) + math.sqrt(gamma(1.0 - alpha)))) ** 2,
        )
        lo = max(profile, RESCALED_MODE_LOWER_FACTOR) * alpha
        hi = gamma(2.0 * alpha) / (2.0 * gamma(alpha) ** 2)
        return Envelope(lo, hi, ext.value)

    if kind == BoundKind.GEN_LOG_SANDWICH:
        # x/(x+1) <= (G(b)/G(a+b)) log_{a,b}(1+x) <= log(1+x)
        if beta is None or not (0.0 < alpha <= 1.0 and beta >= alpha):
            raise DomainError("gen_log_sandwich needs 0 < alpha <= 1, beta >= alpha")
        if x is None or not x > -1.0:
            raise DomainError("gen_log_sandwich needs x > -1")
        value = generalized_log(alpha, beta, 1.0 + x, cfg) / pochhammer_ratio(beta, alpha)
        return Envelope(x / (x + 1.0), math.log1p(x), value)

    raise DomainError(f"unknown bound kind {kind!r}")


# ---------------------------------------------------------------------------
# generalized logarithm
# ---------------------------------------------------------------------------


def generalized_log(
    alpha: float, beta: float, y: float, cfg: EvalConfig = DEFAULT_CONFIG
) -> float:
    """Inverse of the increasing bijection t -> Gamma(b) E_{a,b}(t) at y > 0.

    The initial bracket comes from the hyperbolic bound pair; Brent does the
    rest.  Monotonicity of the target across the bracket is spot-checked
    before inverting.
    """
    if not (0.0 < alpha <= 1.0):
        raise DomainError(f"generalized_log needs alpha in (0, 1], got {alpha}")
    if not beta >= alpha:
        raise DomainError(f"generalized_log needs beta >= alpha, got ({alpha}, {beta})")
    if not (y > 0.0 and math.isfinite(y)):
        raise DomainError(f"generalized_log needs finite y > 0, got {y}")
    if alpha == 1.0 and beta == 1.0:
        return math.log(y)
    if y == 1.0:
        return 0.0

    params = MLParams(alpha, beta)

    def target(t: float) -> float:
        try:
            return eval_ml_rescaled(params, t, Method.AUTO, cfg) - y
        except EvaluationOverflow:
            # the target is increasing; an overflow means far above the root
            return math.inf

    # certified bracket: Gamma(b) E_{a,b}((b)_a x) <= 1/(1-x)+ gives the lower
    # end, the e^x minorant gives the upper end
    pa = pochhammer_ratio(beta, alpha)
    lo = pa * (1.0 - 1.0 / y)
    hi = pa * math.log(y)
    if hi < lo:
        lo, hi = hi, lo
    width = max(hi - lo, 1e-12 * max(abs(lo), abs(hi), 1.0))
    lo -= 1e-9 * width
    hi += 1e-9 * width

    flo = target(lo)
    tries = 0
    while flo > 0.0:
        lo -= max(hi - lo, 1e-6)
        flo = target(lo)
        tries += 1
        if tries > 60:
            raise BracketError(f"no lower bracket for generalized_log at y={y}")
    fhi = target(hi)
    tries = 0
    while math.isfinite(fhi) and fhi < 0.0:
        hi += max(hi - lo, 1e-6)
        fhi = target(hi)
        tries += 1
        if tries > 60:
            raise BracketError(f"no upper bracket for generalized_log at y={y}")
    while not math.isfinite(fhi):
        # shrink the overflowing end back toward the root
        mid = 0.5 * (lo + hi)
        fmid = target(mid)
        if not math.isfinite(fmid):
            hi = mid
        elif fmid < 0.0:
            lo, flo = mid, fmid
        else:
            hi, fhi = mid, fmid
    if flo > fhi:
        raise BracketError(
            "inversion target not increasing across its bracket; evaluator bug"
        )
    root, info = optimize.brentq(
        target, lo, hi, xtol=1e-300, rtol=1e-13, maxiter=cfg.max_iter, full_output=True
    )
    if not info.converged:
        raise ConvergenceError("generalized_log inversion did not converge")
    return float(root)


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SweepReport:
    kind: BoundKind
    n_points: int
    violations: tuple
    max_violation: float
    max_slack_lo: float
    max_slack_hi: float


def sweep_check(
    kind: BoundKind,
    alphas,
    betas=None,
    xs=None,
    cfg: EvalConfig = DEFAULT_CONFIG,
    tol: float = 1e-9,
) -> SweepReport:
    """Run ``envelope`` over a parameter grid and report any violations.

    For the chain kinds (unif1, gen_log_sandwich) the inner ordering between
    the alpha- and beta-indexed members is checked as well.
    """
    alphas = list(np.atleast_1d(alphas))
    betas = list(np.atleast_1d(betas)) if betas is not None else [None]
    xs = list(np.atleast_1d(xs)) if xs is not None else [None]
    violations = []
    worst = 0.0
    slack_lo = -math.inf
    slack_hi = -math.inf
    n = 0
    for a in alphas:
        for b in betas:
            if kind in (BoundKind.UNIF1,) and (b is None or not a < b):
                continue
            if kind == BoundKind.GEN_LOG_SANDWICH and (b is None or not b >= a):
                continue
            for x in xs:
                env = envelope(kind, float(a), None if b is None else float(b), x, cfg)
                n += 1
                gap = min(env.slack_lo, env.slack_hi)
                extras = {}
                if kind == BoundKind.UNIF1:
                    inner = eval_ml(
                        MLParams(float(b), 1.0), -gamma(1.0 + float(b)) * x, Method.AUTO, cfg
                    )
                    extras["inner_gap"] = env.value - inner  # E_a above E_b
                    gap = min(gap, extras["inner_gap"])
                if kind == BoundKind.GEN_LOG_SANDWICH:
                    mid = generalized_log(float(a), float(a), 1.0 + x, cfg) / pochhammer_ratio(
                        float(a), float(a)
                    )
                    extras["mid_gap_lo"] = mid - env.value
                    extras["mid_gap_hi"] = math.log1p(x) - mid
                    gap = min(gap, extras["mid_gap_lo"], extras["mid_gap_hi"])
                if math.isfinite(env.slack_lo):
                    slack_lo = max(slack_lo, env.slack_lo)
                if math.isfinite(env.slack_hi):
                    slack_hi = max(slack_hi, env.slack_hi)
                if gap < -tol:
                    worst = max(worst, -gap)
                    violations.append(
                        dict(alpha=float(a), beta=b, x=x, lo=env.lo, value=env.value,
                             hi=env.hi, **extras)
                    )
    return SweepReport(
        kind=kind,
        n_points=n,
        violations=tuple(violations),
        max_violation=worst,
        max_slack_lo=slack_lo,
        max_slack_hi=slack_hi,
    )
