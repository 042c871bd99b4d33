"""Mittag-Leffler functions on the real line: evaluation by several
independent methods, certified crossing points and extrema, two-sided bound
envelopes, generalized logarithms, seeded samplers with stochastic/convex
order checks, and resolvent solvers for Abelian integral equations."""

__version__ = "0.1.0"

from .config import DEFAULT_CONFIG, EvalConfig
from .errors import (
    BracketError,
    ConvergenceError,
    DomainError,
    EvaluationOverflow,
    MittagError,
    UnsupportedRegionError,
)
from .gammaf import (
    EULER_GAMMA,
    GammaValue,
    digamma,
    gamma,
    gamma_min_on_positive_axis,
    ln_gamma,
    pochhammer_ratio,
)
from .kernels import (
    KernelDensity,
    SignChangeReport,
    count_sign_changes,
    kernel_total_mass,
    kernel_value,
    laplace_transform,
)
from .mleval import (
    Method,
    MLParams,
    eval_ml,
    eval_ml_power,
    eval_ml_rescaled,
    residual_G,
    resolve_method,
)
from .crossings import (
    CrossingResult,
    ExtremumResult,
    ProbeGrid,
    ProbeReport,
    find_mode_m,
    find_x_ab,
    find_x_ab_lambda,
    find_x_star,
    find_yz,
    probe_conjecture,
)
from .sampling import (
    ConvexTestFamily,
    FactorizationReport,
    GeneratorSpec,
    OrderReport,
    RngSeed,
    SampleBatch,
    SelfReciprocalReport,
    check_convex_order,
    check_self_reciprocal,
    cross_validate_factorizations,
    sample,
)
from .abel import (
    AbelProblem,
    ComparisonReport,
    RLCauchyProblem,
    SolutionTrace,
    resolvent_kernel,
    riemann_liouville_integral,
    solve_caputo,
    solve_rl_cauchy,
    solve_second_kind,
    verify_comparison,
)
from .bounds import (
    BoundKind,
    Envelope,
    SweepReport,
    envelope,
    generalized_log,
    sweep_check,
)
