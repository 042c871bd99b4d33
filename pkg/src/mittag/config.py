"""Evaluation tolerances and budgets passed around by value."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class EvalConfig:
    """Numerical knobs for series, quadrature and iterative solvers.

    rel_tol   relative tolerance targeted by evaluators
    abs_tol   absolute floor below which magnitudes count as zero
    max_terms cap on series terms
    max_iter  cap on root-finding / inversion iterations
    """

    rel_tol: float = 1e-12
    abs_tol: float = 1e-300
    max_terms: int = 10_000
    max_iter: int = 200

    def __post_init__(self) -> None:
        if not self.rel_tol > 0.0:
            raise DomainError(f"rel_tol must be > 0, got {self.rel_tol}")
        if self.abs_tol < 0.0:
            raise DomainError(f"abs_tol must be >= 0, got {self.abs_tol}")
        if self.max_terms < 16:
            raise DomainError(f"max_terms must be >= 16, got {self.max_terms}")
        if self.max_iter < 8:
            raise DomainError(f"max_iter must be >= 8, got {self.max_iter}")


DEFAULT_CONFIG = EvalConfig()
