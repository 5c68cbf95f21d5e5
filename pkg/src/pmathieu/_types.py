"""Result containers, method tags and the exception hierarchy."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass


class DomainError(ValueError):
    """Raised when parameters fall outside an operation's domain."""


class ConvergenceError(RuntimeError):
    """Raised when a tolerance cannot be met.

    The best available estimate is kept on the exception so callers can
    still report it.
    """

    def __init__(self, message: str, best: "EvalResult | None" = None):
        super().__init__(message)
        self.best = best


class DivergenceError(ConvergenceError):
    """Raised when series terms stop decreasing."""


class InternalConsistencyError(RuntimeError):
    """Raised when a quantity that must be real picks up an imaginary part."""


class MethodKind(str, enum.Enum):
    SERIES_A3 = "series"
    INTEGRAL_A4 = "integral"
    THM1_INT = "thm1"
    B1 = "b1"
    B2 = "b2"
    B3 = "b3"
    B4 = "b4"
    B7 = "b7"
    CLASSICAL = "classical"
    # auxiliary tags for the zeta, quadrature and derivative layers
    ZETA = "zeta"
    ZETA_P_INTEGRAL = "zeta_p_integral"
    ZETA_P_KSERIES = "zeta_p_kseries"
    QUADRATURE = "quadrature"
    LAPLACE_SUM = "laplace_sum"
    GL_FRACTIONAL = "gl_fractional"
    FINITE_DIFFERENCE = "finite_difference"


@dataclass(frozen=True)
class EvalResult:
    """A value together with how it was obtained.

    Attributes
    ----------
    value : float
    err_estimate : float
        A-posteriori absolute error estimate (non-negative, finite).
    terms_or_nodes : int
        Series terms or quadrature panels/nodes consumed.
    method : MethodKind
    imag_residue : float
        Largest relative imaginary residue seen in a conjugate-pair sum,
        zero for purely real evaluations.
    """

    value: float
    err_estimate: float
    terms_or_nodes: int
    method: MethodKind
    imag_residue: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.err_estimate) or self.err_estimate < 0:
            raise ValueError(f"bad error estimate {self.err_estimate!r}")
        if self.terms_or_nodes < 1:
            raise ValueError("terms_or_nodes must be >= 1")

    @property
    def rel_err(self) -> float:
        return self.err_estimate / abs(self.value) if self.value else math.inf


def check_tol(tol: float) -> float:
    if not (1e-14 <= tol <= 1e-4):
        raise DomainError(f"tol must lie in [1e-14, 1e-4], got {tol!r}")
    return tol


def clamp_tol(tol: float) -> float:
    """Clamp an internally derived tolerance into the accepted range."""
    return min(max(tol, 1e-14), 1e-4)
