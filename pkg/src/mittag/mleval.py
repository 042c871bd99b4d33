"""Multi-regime evaluation of E_alpha and E_{alpha,beta} on the real line.

The two-parameter function is

    E_{a,b}(z) = sum_{n>=0} z^n / Gamma(b + a n),

entire in z for a > 0, b > 0.  Internally everything is computed in the
rescaled form F(a, b, z) = Gamma(b) E_{a,b}(z), whose series terms
z^n Gamma(b)/Gamma(b + a n) stay representable even for b in the hundreds.

Methods:

  series      direct summation; positive arguments accumulate in log space
              (no cancellation), negative arguments use float summation with
              a running cancellation estimate and escalate to an mpmath pass
              when float precision cannot reach the requested tolerance.
  integral    the kernel Laplace-transform representations (beta = 1), the
              reduction to a beta-weighted average of E_alpha (beta > 1) and
              the t^(alpha-beta) representation (beta < 1, cross-check only).
  duplication E_{a,b}(z) = (E_{a/2,b}(sqrt z) + E_{a/2,b}(-sqrt z)) / 2, z >= 0.
  asymptotic  E_{a,b}(z) ~ -sum_{k>=1} z^(-k)/Gamma(b - a k) for z -> -inf,
              truncated at the smallest term.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import mpmath
import numpy as np
from scipy import integrate
from scipy import special as sp

from .config import DEFAULT_CONFIG, EvalConfig
from .errors import (
    ConvergenceError,
    DomainError,
    EvaluationOverflow,
    UnsupportedRegionError,
)
from .gammaf import LOG_FLOAT_MAX
from .kernels import SIN_DEGENERATE, laplace_f, laplace_g, layer_pieces

_EPS = float(np.finfo(float).eps)

# |z| at or below this, the series is the method of choice everywhere.
SERIES_MAX_ABS = 5.0
# beyond this magnitude on the negative axis the asymptotic tail takes over.
ASYMPTOTIC_MIN_ABS = 1e4


class Method(enum.Enum):
    SERIES = "series"
    INTEGRAL_REP = "integral"
    DUPLICATION = "duplication"
    ASYMPTOTIC = "asymptotic"
    AUTO = "auto"


@dataclass(frozen=True)
class MLParams:
    """The pair (alpha, beta); beta = 1 is the one-parameter function."""

    alpha: float
    beta: float = 1.0

    def __post_init__(self) -> None:
        if not (0.0 < self.alpha <= 26.0):
            raise DomainError(f"alpha must lie in (0, 26], got {self.alpha}")
        if not (0.0 < self.beta <= 200.0):
            raise DomainError(f"beta must lie in (0, 200], got {self.beta}")


def _near_integer_alpha(alpha: float) -> bool:
    return abs(math.sin(math.pi * alpha)) < SIN_DEGENERATE


# ---------------------------------------------------------------------------
# series
# ---------------------------------------------------------------------------


def _series_positive_log(alpha: float, beta: float, z: float, cfg: EvalConfig) -> float:
    """log of Gamma(b) E_{a,b}(z) for z > 0, via online log-sum-exp."""
    lz = math.log(z)
    lg_beta = float(sp.gammaln(beta))
    lg_prev = lg_beta
    log_term = 0.0  # n = 0 scaled term is 1
    m, s = 0.0, 1.0
    log_stop = math.log(cfg.rel_tol) - 5.0
    for n in range(1, cfg.max_terms + 1):
        lg_next = float(sp.gammaln(beta + alpha * n))
        new_log_term = log_term + lz - (lg_next - lg_prev)
        decreasing = new_log_term < log_term
        log_term, lg_prev = new_log_term, lg_next
        if log_term <= m:
            s += math.exp(log_term - m)
        else:
            s = s * math.exp(m - log_term) + 1.0
            m = log_term
        if decreasing and log_term - m < log_stop + math.log(s):
            return m + math.log(s)
    raise ConvergenceError(
        f"series for (alpha={alpha}, beta={beta}, z={z}) needs more than "
        f"{cfg.max_terms} terms"
    )


def _series_negative_float(alpha: float, beta: float, z: float, cfg: EvalConfig):
    """Float Kahan summation of Gamma(b) E_{a,b}(z) for z < 0.

    Returns (sum, max_abs_term, max_log_term, ok) where ok is False when the
    terms left the float range (caller must escalate).
    """
    term = 1.0
    total = 1.0
    comp = 0.0
    max_abs = 1.0
    max_log = 0.0
    log_term = 0.0
    lz = math.log(-z)
    lg_prev = float(sp.gammaln(beta))
    prev_abs = 1.0
    for n in range(1, cfg.max_terms + 1):
        lg_next = float(sp.gammaln(beta + alpha * n))
        dlg = lg_next - lg_prev
        lg_prev = lg_next
        log_term += lz - dlg
        max_log = max(max_log, log_term)
        if log_term > LOG_FLOAT_MAX - 5.0:
            # keep scanning in log space until the terms decay, to size the peak
            for n2 in range(n + 1, cfg.max_terms + 1):
                lg_next = float(sp.gammaln(beta + alpha * n2))
                log_term += lz - (lg_next - lg_prev)
                lg_prev = lg_next
                if log_term < max_log - 10.0:
                    return total, max_abs, max_log, False
                max_log = max(max_log, log_term)
            return total, max_abs, max_log, False
        term *= z * math.exp(-dlg)
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        abs_term = abs(term)
        max_abs = max(max_abs, abs_term)
        decreasing = abs_term < prev_abs
        prev_abs = abs_term
        if decreasing and abs_term <= max(
            cfg.rel_tol * abs(total) * 1e-2, _EPS * max_abs * 1e-2, cfg.abs_tol
        ):
            return total, max_abs, max_log, True
    raise ConvergenceError(
        f"series for (alpha={alpha}, beta={beta}, z={z}) needs more than "
        f"{cfg.max_terms} terms"
    )


def _series_negative_mp(alpha: float, beta: float, z: float, dps: int, cfg: EvalConfig) -> float:
    """mpmath summation of Gamma(b) E_{a,b}(z), z < 0, at ``dps`` digits."""
    with mpmath.workdps(dps):
        a = mpmath.mpf(alpha)
        b = mpmath.mpf(beta)
        zz = mpmath.mpf(z)
        total = mpmath.mpf(1)
        term = mpmath.mpf(1)
        lg_prev = mpmath.loggamma(b)
        # for an eventually-alternating series the running total stays within
        # one term of the limit, so a fixed relative cutoff suffices; the dps
        # only has to absorb the peak-term cancellation
        stop = mpmath.mpf("1e-25")
        max_term = mpmath.mpf(1)
        rounding_floor_exp = -(dps - 5)
        prev_abs = mpmath.mpf(1)
        for n in range(1, cfg.max_terms + 1):
            lg_next = mpmath.loggamma(b + a * n)
            term *= zz * mpmath.exp(lg_prev - lg_next)
            lg_prev = lg_next
            total += term
            abs_term = abs(term)
            max_term = max(max_term, abs_term)
            if abs_term < prev_abs:
                if abs_term <= stop * abs(total):
                    return float(total)
                if abs_term <= max_term * mpmath.mpf(10) ** rounding_floor_exp:
                    return float(total)  # below the rounding noise already present
            prev_abs = abs_term
        raise ConvergenceError(
            f"mpmath series for (alpha={alpha}, beta={beta}, z={z}) did not "
            f"converge within {cfg.max_terms} terms"
        )


def _exp_leading_log(alpha: float, beta: float, z: float) -> float:
    """log of Gamma(b) E_{a,b}(z) from the exponential leading term.

    Valid for alpha in (0,2) deep in the growth regime (the series peak far
    out of reach): E ~ (1/alpha) x^(1-beta) e^x with x = z^(1/alpha); the
    omitted contributions are smaller by at least e^(-x) factors there.
    """
    log_x = math.log(z) / alpha
    if log_x > LOG_FLOAT_MAX:
        raise EvaluationOverflow(
            f"even log E_({alpha},{beta})({z}) exceeds the float range"
        )
    x = math.exp(log_x)
    return x + (1.0 - beta) * log_x - math.log(alpha) + float(sp.gammaln(beta))


def _positive_series_infeasible(alpha: float, beta: float, z: float, cfg: EvalConfig) -> bool:
    """True when the positive-axis series peak lies beyond the term budget."""
    log_x = math.log(z) / alpha
    if log_x > LOG_FLOAT_MAX:
        return True
    n_peak = (math.exp(log_x) - beta) / alpha
    return n_peak + 64.0 > 0.8 * cfg.max_terms


def _series_scaled(alpha: float, beta: float, z: float, cfg: EvalConfig) -> float:
    """Gamma(b) E_{a,b}(z) by series, choosing the float/log/mpmath path."""
    if z == 0.0:
        return 1.0
    if z > 0.0:
        if 0.0 < alpha < 2.0 and _positive_series_infeasible(alpha, beta, z, cfg):
            log_val = _exp_leading_log(alpha, beta, z)
        else:
            log_val = _series_positive_log(alpha, beta, z, cfg)
        if log_val > LOG_FLOAT_MAX:
            raise EvaluationOverflow(
                f"Gamma(beta) E_({alpha},{beta})({z}) = exp({log_val:.4g}) overflows"
            )
        return math.exp(log_val)

    total, max_abs, max_log, ok = _series_negative_float(alpha, beta, z, cfg)
    if ok:
        err = _EPS * max_abs
        if err <= cfg.rel_tol * abs(total) or err <= cfg.abs_tol:
            return total
    # Escalate: cancellation beyond float precision.  The float total is only
    # trusted as a scale when it stands above its own noise floor; the mpmath
    # pass is accepted once two consecutive precisions agree.
    if ok and abs(total) > 2.0 * _EPS * max_abs:
        scale_guess = abs(total)
    else:
        scale_guess = 1e-10
    dps = max(30, int((max_log - math.log(scale_guess)) / math.log(10.0)) + 20)
    prev = None
    while dps <= 3300:
        val = _series_negative_mp(alpha, beta, z, dps, cfg)
        if prev is not None:
            if val == prev == 0.0:
                return val
            if val != 0.0 and abs(val - prev) <= 1e-13 * abs(val):
                return val
        prev = val
        dps = int(dps * 1.6) + 10
    raise ConvergenceError(
        f"series at (alpha={alpha}, beta={beta}, z={z}) does not stabilise "
        f"within 3300 digits; argument out of supported range"
    )


# ---------------------------------------------------------------------------
# asymptotic tail on the negative axis
# ---------------------------------------------------------------------------


def _asymptotic_scaled_from_log(
    alpha: float, beta: float, log_abs_z: float, cfg: EvalConfig
) -> float:
    """Gamma(b) E_{a,b}(z) for z = -exp(log_abs_z), truncated at smallest term."""
    lg_beta = float(sp.gammaln(beta))
    total = 0.0
    smallest = math.inf
    # individual terms wobble near the 1/Gamma poles, so the truncation point
    # is the analytic turning index k ~ |z|^(1/alpha)/alpha, not the first
    # local increase
    k_turn = max(8.0, math.exp(log_abs_z / alpha) / alpha)
    for k in range(1, min(int(k_turn), 400) + 1):
        arg = beta - alpha * k
        if arg <= 0.0 and arg == math.floor(arg):
            continue  # 1/Gamma pole: term vanishes
        log_abs = lg_beta - k * log_abs_z - float(sp.gammaln(arg))
        sign = float(sp.gammasgn(arg))
        abs_term = math.exp(log_abs) if log_abs > -745.0 else 0.0
        term = -((-1.0) ** k) * sign * abs_term
        total += term
        smallest = abs_term
        if abs_term <= cfg.abs_tol or abs_term <= cfg.rel_tol * abs(total) * 1e-2:
            break
    if total != 0.0 and smallest > 1e-6 * abs(total):
        raise ConvergenceError(
            f"asymptotic tail at log|z|={log_abs_z:.3g} stalls at relative "
            f"{smallest / abs(total):.2g}"
        )
    return total


def _asymptotic_scaled(alpha: float, beta: float, z: float, cfg: EvalConfig) -> float:
    if not z < 0.0:
        raise UnsupportedRegionError("asymptotic expansion applies to z < 0 only")
    return _asymptotic_scaled_from_log(alpha, beta, math.log(-z), cfg)


# ---------------------------------------------------------------------------
# integral representations
# ---------------------------------------------------------------------------


def _integral_beta1_scaled(alpha: float, z: float, cfg: EvalConfig) -> float:
    """E_alpha(z) via the kernel Laplace transforms, alpha in (0,2), |z| > 0."""
    if _near_integer_alpha(alpha):
        raise UnsupportedRegionError(
            f"integral representation degenerates near integer alpha={alpha}"
        )
    x = math.pow(abs(z), 1.0 / alpha)
    if z < 0.0:
        if not 0.0 < alpha < 1.0:
            raise UnsupportedRegionError(
                "negative-axis kernel representation needs alpha in (0,1)"
            )
        return laplace_g(alpha, x)
    # positive axis: e^x/alpha minus the f-kernel transform
    if x > LOG_FLOAT_MAX:
        raise EvaluationOverflow(f"E_{alpha}({z}) ~ exp({x:.4g})/alpha overflows")
    return math.exp(x) / alpha - laplace_f(alpha, x)


def _integral_beta_eq_alpha_scaled(alpha: float, z: float, cfg: EvalConfig) -> float:
    """Gamma(a) E_{a,a}(z) for z < 0, alpha in (0,1), via the t g_a(t) kernel.

    Differentiating the g-kernel representation gives, with x = |z|^(1/a),

        x^(a-1) E_{a,a}(-x^a) = int_0^inf e^(-x t) t g_a(t) dt
           = sin(pi a)/(pi a) int_0^1 [u^(1/a) e^(-x u^(1/a))
                                       + u^(-1/a) e^(-x u^(-1/a))]
                                      / (u^2 + 2 cos(pi a) u + 1) du.
    """
    if not (0.0 < alpha < 1.0 and z < 0.0):
        raise UnsupportedRegionError(
            "the derivative-kernel route needs alpha in (0,1) and z < 0"
        )
    if _near_integer_alpha(alpha):
        raise UnsupportedRegionError("kernel degenerates near integer alpha")
    x = math.pow(-z, 1.0 / alpha)
    s, c = math.sin(math.pi * alpha), math.cos(math.pi * alpha)
    inv_a = 1.0 / alpha

    def integrand(u: float) -> float:
        if u <= 0.0:
            return 0.0
        t_small = u**inv_a
        head = t_small * math.exp(-x * t_small) if x * t_small < 745.0 else 0.0
        inv = 1.0 / t_small
        tail = inv * math.exp(-x * inv) if x * inv < 745.0 else 0.0
        return (head + tail) / (u * u + 2.0 * c * u + 1.0)

    total = 0.0
    pieces = layer_pieces(alpha, x)
    for lo, hi in zip(pieces[:-1], pieces[1:]):
        val, _ = integrate.quad(integrand, lo, hi, epsabs=1e-15, epsrel=1e-12, limit=200)
        total += val
    lap = s / (math.pi * alpha) * total
    return math.exp(float(sp.gammaln(alpha))) * math.pow(x, 1.0 - alpha) * lap


def _integral_interpolation_scaled(
    alpha: float, beta: float, z: float, cfg: EvalConfig
) -> float:
    """Gamma(b) E_{a,b}(z) = (b-1) int_0^1 (1-t)^(b-2) E_a(z t^a) dt, b > 1.

    Substituting u = t^alpha removes the cusp of the integrand at t = 0; the
    endpoint weights u^(1/alpha - 1) (1-u)^(beta-2) go to QAWS and the
    remaining factor is smooth on [0, 1].
    """
    if not beta > 1.0:
        raise UnsupportedRegionError("interpolation route needs beta > 1")
    inv_a = 1.0 / alpha
    # a single representation for the inner values keeps the integrand free
    # of method-boundary seams that stall the adaptive extrapolation
    seamless = 0.0 < alpha < 1.0 and not _near_integer_alpha(alpha)
    inner_method = Method.INTEGRAL_REP if seamless else Method.AUTO

    def inner(u: float) -> float:
        e_val = _eval_scaled(alpha, 1.0, z * u, cfg, inner_method)[0]
        if u >= 1.0:
            shape = inv_a ** (beta - 2.0)
        elif u <= 0.0:
            shape = 1.0
        else:
            shape = ((1.0 - u**inv_a) / (1.0 - u)) ** (beta - 2.0)
        return e_val * shape

    import warnings

    with warnings.catch_warnings():
        # the inner evaluations carry ~1e-13 noise which the extrapolation
        # may flag; the route is cross-validated against the series
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, _ = integrate.quad(
            inner, 0.0, 1.0, weight="alg", wvar=(inv_a - 1.0, beta - 2.0),
            epsabs=1e-14, epsrel=1e-11, limit=200,
        )
    return (beta - 1.0) * inv_a * val


def _recurrence_up_scaled(alpha: float, beta: float, z: float, cfg: EvalConfig) -> float:
    """Gamma(b) E_{a,b}(z) for b < 1 by climbing the beta recurrence.

    E_{a,b}(z) = 1/Gamma(b) + z E_{a,b+a}(z) lifts the second parameter
    above 1 where the beta-average representation applies; each step costs
    about one digit per factor of |z|.
    """
    if not (0.0 < alpha < 1.0 and 0.0 < beta <= 1.0):
        raise UnsupportedRegionError("recurrence route needs alpha, beta in (0,1]")
    k = int(math.floor((1.0 - beta) / alpha)) + 1
    top = beta + k * alpha
    if top <= 1.0 + 1e-9:
        k += 1
        top = beta + k * alpha
    val = _integral_interpolation_scaled(alpha, top, z, cfg)
    for j in range(k - 1, -1, -1):
        bj = beta + j * alpha
        ratio = math.exp(float(sp.gammaln(bj)) - float(sp.gammaln(bj + alpha)))
        val = 1.0 + z * ratio * val
    return val


def _integral_popov_scaled(alpha: float, beta: float, z: float, cfg: EvalConfig) -> float:
    """Gamma(b) E_{a,b}(z) for z > 0 via the t^(alpha-beta) representation.

    Valid for alpha in (0,1), beta in (0,1); a cross-check route only.
    """
    if not (0.0 < alpha < 1.0 and 0.0 < beta < 1.0 and z > 0.0):
        raise UnsupportedRegionError(
            "this representation needs alpha, beta in (0,1) and z > 0"
        )
    if _near_integer_alpha(alpha):
        raise UnsupportedRegionError("representation degenerates near integer alpha")
    x = math.pow(z, 1.0 / alpha)
    sa, ca = math.sin(math.pi * alpha), math.cos(math.pi * alpha)
    sb = math.sin(math.pi * beta)
    sab = math.sin(math.pi * (alpha - beta))
    p = (1.0 - beta) / alpha
    inv_a = 1.0 / alpha

    def integrand(u):
        with np.errstate(over="ignore", under="ignore"):
            return (
                np.power(u, p)
                * np.exp(-x * np.power(u, inv_a))
                * (sb * u + sab)
                / (u * u - 2.0 * ca * u + 1.0)
            )

    tail, _ = integrate.quad(integrand, 0.0, np.inf, **{"epsabs": 1e-13, "epsrel": 1e-11, "limit": 300})
    log_lead = x - math.log(alpha) + (1.0 - beta) * math.log(x)
    if log_lead > LOG_FLOAT_MAX:
        raise EvaluationOverflow(f"representation leading term exp({log_lead:.4g}) overflows")
    value = math.pow(x, 1.0 - beta) * (math.exp(x) / alpha + tail / (alpha * math.pi))
    return math.exp(float(sp.gammaln(beta))) * value


# ---------------------------------------------------------------------------
# closed forms and duplication
# ---------------------------------------------------------------------------


def _closed_form_scaled(alpha: float, beta: float, z: float):
    """Gamma(b) E_{a,b}(z) for (a, b) in {1, 2} x {1, 2}; None when absent."""
    if alpha == 1.0:
        if beta == 1.0:
            if z > LOG_FLOAT_MAX:
                raise EvaluationOverflow(f"exp({z}) overflows")
            return math.exp(z)
        if beta == 2.0:
            if z == 0.0:
                return 1.0
            if z > LOG_FLOAT_MAX:
                raise EvaluationOverflow(f"(exp({z})-1)/{z} overflows")
            return math.expm1(z) / z
    if alpha == 2.0:
        r = math.sqrt(abs(z))
        if beta == 1.0:
            if z >= 0.0:
                if r > LOG_FLOAT_MAX:
                    raise EvaluationOverflow(f"cosh({r}) overflows")
                return math.cosh(r)
            return math.cos(r)
        if beta == 2.0:
            if z == 0.0:
                return 1.0
            if z > 0.0:
                if r > LOG_FLOAT_MAX:
                    raise EvaluationOverflow(f"sinh({r}) overflows")
                return math.sinh(r) / r
            return math.sin(r) / r
    return None


def _duplication_scaled(alpha: float, beta: float, z: float, cfg: EvalConfig) -> float:
    if z < 0.0:
        raise UnsupportedRegionError("duplication needs a nonnegative argument")
    if not 0.0 < alpha <= 4.0:
        raise UnsupportedRegionError("duplication restricted to alpha in (0, 4]")
    r = math.sqrt(z)
    half = alpha / 2.0
    plus = _eval_scaled(half, beta, r, cfg, Method.AUTO)[0]
    minus = _eval_scaled(half, beta, -r, cfg, Method.AUTO)[0]
    return 0.5 * (plus + minus)


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------


def _asymptotic_reliable(alpha: float, beta: float, z: float) -> bool:
    """True when the truncated negative-axis tail is trusted at z < 0.

    The integer-power tail is only complete for beta in {1, alpha} (the
    kernel-representation cases, cross-validated at machine precision); for
    alpha in (1,2) the oscillatory exp(L cos(pi/alpha)) contribution must
    additionally be negligible, with L = |z|^(1/alpha).
    """
    if beta not in (1.0, alpha):
        return False
    log_L = math.log(abs(z)) / alpha
    if alpha <= 1.0:
        return log_L > math.log(45.0)
    damp = -math.cos(math.pi / alpha)
    if damp <= 0.0:
        return False
    return log_L > 8.0 or math.exp(log_L) * damp > 45.0


def _series_cheap(alpha: float, z: float) -> bool:
    """Whether the escalated series stays cheap: L = |z|^(1/alpha) <= 40."""
    return math.log(abs(z)) / alpha <= math.log(40.0)


def resolve_method(
    params: MLParams, x: float, cfg: EvalConfig = DEFAULT_CONFIG
) -> Method:
    """The method Auto dispatch would pick for this evaluation.

    Series cost and float cancellation both grow with L = |x|^(1/alpha), so
    on the negative axis the kernel representations take over once L is
    sizeable even when |x| itself is small.
    """
    a, b = params.alpha, params.beta
    if x == 0.0 or a >= 2.0 or _near_integer_alpha(a):
        return Method.SERIES
    if x > 0.0:
        if x <= SERIES_MAX_ABS:
            return Method.SERIES
        if b == 1.0:
            return Method.INTEGRAL_REP
        if b > 1.0 and 0.0 < a < 1.0:
            return Method.INTEGRAL_REP
        return Method.SERIES  # positive terms accumulate exactly in log space
    # x < 0
    if 0.0 < a < 1.0 and (b == 1.0 or b == a):
        heavy_series = math.log(-x) / a > math.log(20.0)
        if abs(x) <= SERIES_MAX_ABS and not heavy_series:
            return Method.SERIES
        return Method.ASYMPTOTIC if abs(x) > ASYMPTOTIC_MIN_ABS else Method.INTEGRAL_REP
    if 0.0 < a < 1.0 and b > 1.0:
        return Method.SERIES if abs(x) <= SERIES_MAX_ABS else Method.INTEGRAL_REP
    if 1.0 < a < 2.0:
        if abs(x) > ASYMPTOTIC_MIN_ABS and _asymptotic_reliable(a, b, x):
            return Method.ASYMPTOTIC
        return Method.SERIES
    # a in (0,1) with b < 1, b != a: series when affordable, otherwise climb
    # the beta-recurrence into the interpolation representation
    if _series_cheap(a, x):
        return Method.SERIES
    return Method.INTEGRAL_REP


def _eval_scaled(
    alpha: float, beta: float, z: float, cfg: EvalConfig, method: Method
) -> tuple[float, Method]:
    """Core: Gamma(b) E_{a,b}(z) with the resolved method tag."""
    if method == Method.AUTO:
        closed = _closed_form_scaled(alpha, beta, z)
        if closed is not None:
            return closed, Method.SERIES
        method = resolve_method(MLParams(alpha, beta), z)

        if method == Method.SERIES:
            return _series_scaled(alpha, beta, z, cfg), method
        if method == Method.ASYMPTOTIC:
            return _asymptotic_scaled(alpha, beta, z, cfg), method
        # integral representations
        if beta == 1.0:
            return _integral_beta1_scaled(alpha, z, cfg), method
        if beta == alpha and z < 0.0:
            return _integral_beta_eq_alpha_scaled(alpha, z, cfg), method
        if beta < 1.0 and z < 0.0:
            return _recurrence_up_scaled(alpha, beta, z, cfg), method
        return _integral_interpolation_scaled(alpha, beta, z, cfg), method

    if method == Method.SERIES:
        closed = _closed_form_scaled(alpha, beta, z)
        if closed is not None:
            return closed, method
        return _series_scaled(alpha, beta, z, cfg), method
    if method == Method.ASYMPTOTIC:
        if z >= 0.0 or not _asymptotic_reliable(alpha, beta, z):
            raise UnsupportedRegionError(
                f"asymptotic expansion unreliable at (alpha={alpha}, beta={beta}, z={z})"
            )
        return _asymptotic_scaled(alpha, beta, z, cfg), method
    if method == Method.DUPLICATION:
        return _duplication_scaled(alpha, beta, z, cfg), method
    if method == Method.INTEGRAL_REP:
        if not 0.0 < alpha < 2.0:
            raise UnsupportedRegionError(
                f"integral representations need alpha in (0,2), got {alpha}"
            )
        if beta == 1.0:
            return _integral_beta1_scaled(alpha, z, cfg), method
        if beta == alpha and z < 0.0:
            return _integral_beta_eq_alpha_scaled(alpha, z, cfg), method
        if beta > 1.0:
            return _integral_interpolation_scaled(alpha, beta, z, cfg), method
        if z < 0.0:
            return _recurrence_up_scaled(alpha, beta, z, cfg), method
        return _integral_popov_scaled(alpha, beta, z, cfg), method
    raise UnsupportedRegionError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# public surface
# ---------------------------------------------------------------------------


def eval_ml(
    params: MLParams,
    x: float,
    method: Method = Method.AUTO,
    cfg: EvalConfig = DEFAULT_CONFIG,
) -> float:
    """E_{alpha,beta}(x) for real x."""
    if not math.isfinite(x):
        raise DomainError(f"argument must be finite, got {x}")
    scaled, _ = _eval_scaled(params.alpha, params.beta, x, cfg, method)
    return scaled * math.exp(-float(sp.gammaln(params.beta)))


def eval_ml_rescaled(
    params: MLParams,
    x: float,
    method: Method = Method.AUTO,
    cfg: EvalConfig = DEFAULT_CONFIG,
) -> float:
    """Gamma(beta) E_{alpha,beta}(x), stable for large beta."""
    if not math.isfinite(x):
        raise DomainError(f"argument must be finite, got {x}")
    scaled, _ = _eval_scaled(params.alpha, params.beta, x, cfg, method)
    return scaled


def eval_ml_log(
    params: MLParams,
    x: float,
    cfg: EvalConfig = DEFAULT_CONFIG,
) -> float:
    """log E_{alpha,beta}(x) for x >= 0, beyond the float range of E itself.

    On the nonnegative axis every series term is positive, so the log of the
    sum is formed exactly by online log-sum-exp.
    """
    if not (math.isfinite(x) and x >= 0.0):
        raise UnsupportedRegionError(
            "log evaluation needs a nonnegative argument (the value may "
            "change sign elsewhere)"
        )
    if x == 0.0:
        return -float(sp.gammaln(params.beta))
    a, b = params.alpha, params.beta
    if 0.0 < a < 2.0 and _positive_series_infeasible(a, b, x, cfg):
        log_scaled = _exp_leading_log(a, b, x)
    else:
        log_scaled = _series_positive_log(a, b, x, cfg)
    return log_scaled - float(sp.gammaln(b))


def eval_ml_power(
    alpha: float,
    x: float,
    sign: int,
    cfg: EvalConfig = DEFAULT_CONFIG,
) -> float:
    """E_alpha(sign * x^alpha) with x^alpha formed in log space.

    Handles x^alpha beyond the float range: on the negative side via the
    asymptotic tail in log space, on the positive side by raising overflow.
    """
    if sign not in (-1, 1):
        raise DomainError(f"sign must be +-1, got {sign}")
    if x < 0.0:
        raise DomainError(f"x must be >= 0, got {x}")
    params = MLParams(alpha, 1.0)
    if x == 0.0:
        return 1.0
    log_z = alpha * math.log(x)
    if log_z > LOG_FLOAT_MAX:
        if sign > 0:
            raise EvaluationOverflow(
                f"E_{alpha}(x^alpha) with x={x} overflows the float range"
            )
        return _asymptotic_scaled_from_log(alpha, 1.0, log_z, cfg)
    return eval_ml(params, sign * math.exp(log_z), Method.AUTO, cfg)


def residual_G(alpha: float, x: float, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """G_alpha(x) = e^x - alpha E_alpha(x^alpha) for alpha in (0, 4], x > 0.

    Computed without forming the catastrophic difference: on (0,2) the
    residual is alpha times the f-kernel Laplace transform; on (2,4) it
    splits as G_{a/2}(x) - (a/2) E_{a/2}(-x^(a/2)).
    """
    if not 0.0 < alpha <= 4.0:
        raise DomainError(f"residual needs alpha in (0, 4], got {alpha}")
    if not x > 0.0:
        raise DomainError(f"residual needs x > 0, got {x}")
    if alpha == 1.0:
        return 0.0
    if alpha == 2.0:
        return -math.exp(-x)
    if alpha <= 2.0:
        if _near_integer_alpha(alpha):
            return _residual_mp(alpha, x)
        return alpha * laplace_f(alpha, x)
    half = alpha / 2.0
    e_minus = eval_ml(MLParams(half, 1.0), -math.pow(x, half), Method.AUTO, cfg)
    return residual_G(half, x, cfg) - half * e_minus


def _residual_mp(alpha: float, x: float) -> float:
    """Direct high-precision e^x - alpha E_alpha(x^alpha) near integer alpha."""
    dps = int(x / math.log(10.0)) + 30
    with mpmath.workdps(dps):
        a = mpmath.mpf(alpha)
        z = mpmath.mpf(x) ** a
        total = mpmath.mpf(0)
        term = mpmath.mpf(1)
        lg_prev = mpmath.loggamma(1)
        total += term
        for n in range(1, 100000):
            lg_next = mpmath.loggamma(1 + a * n)
            term *= z * mpmath.exp(lg_prev - lg_next)
            lg_prev = lg_next
            total += term
            if term < mpmath.mpf(10) ** (-(dps - 3)) * total:
                break
        return float(mpmath.exp(mpmath.mpf(x)) - a * total)
