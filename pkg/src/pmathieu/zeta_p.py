r"""The p-extended Riemann zeta function.

.. math::
    \zeta_p(\alpha) = \frac{1}{\Gamma(\alpha)} \int_0^\infty
        \frac{t^{\alpha-1} e^{-p/t}}{e^t - 1} \, dt
      = \frac{2 p^{\alpha/2}}{\Gamma(\alpha)} \sum_{n\ge1}
        \frac{K_\alpha(2\sqrt{np})}{n^{\alpha/2}},

reducing to :math:`\zeta(\alpha)` at ``p = 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ._types import ConvergenceError, DomainError, EvalResult, MethodKind, check_tol
from .quadrature import IntegrandSpec, Weight, integrate_semi_infinite
from .special_kernels import log_bessel_k_real, riemann_zeta

DISPATCH_P_THRESHOLD = 0.05
_KSERIES_MAX_TERMS = 200_000


@dataclass(frozen=True)
class ZetaPParams:
    alpha: float
    p: float

    def __post_init__(self):
        if not self.p >= 0 or not math.isfinite(self.p):
            raise DomainError(f"p must satisfy p >= 0, got {self.p!r}")
        if self.p == 0 and not self.alpha > 1:
            raise DomainError(f"zeta_p with p = 0 needs alpha > 1 (pole of zeta), got {self.alpha!r}")
        if not self.alpha > 0:
            raise DomainError(f"zeta_p needs alpha > 0, got {self.alpha!r}")


def zeta_p_integral(params: ZetaPParams, tol: float = 1e-12) -> EvalResult:
    """Evaluate by quadrature of the defining integral."""
    check_tol(tol)
    a, p = params.alpha, params.p
    spec = IntegrandSpec(sigma=a - 1.0, p=p, weight=Weight.BOSE, log_scale=math.lgamma(a))
    res = integrate_semi_infinite(spec, tol)
    return EvalResult(res.value, res.err_estimate, res.terms_or_nodes, MethodKind.ZETA_P_INTEGRAL)


def _kseries_log_term(a: float, p: float, n: int) -> float:
    return (
        math.log(2.0)
        + 0.5 * a * (math.log(p) - math.log(n))
        + log_bessel_k_real(a, 2.0 * math.sqrt(n * p))
        - math.lgamma(a)
    )


def zeta_p_kseries(params: ZetaPParams, tol: float = 1e-12, *, trace=None) -> EvalResult:
    """Evaluate by the Schlomilch series of :math:`K_\\alpha` terms.

    Terms are formed in log space so very large orders do not overflow.
    After term ``n`` the remaining tail is bounded geometrically with the ratio
    :math:`e^{-2(\\sqrt{n+1}-\\sqrt{n})\\sqrt{p}} (n/(n+1))^{\\alpha/2}`, which
    dominates the true term ratio because :math:`e^x K_\\alpha(x)` decreases.
    """
    check_tol(tol)
    a, p = params.alpha, params.p
    if p == 0:
        raise DomainError("the K-series needs p > 0")
    partial = 0.0
    term = 0.0
    for n in range(1, _KSERIES_MAX_TERMS + 1):
        term = math.exp(_kseries_log_term(a, p, n))
        partial += term
        rho = math.exp(-2.0 * (math.sqrt(n + 1) - math.sqrt(n)) * math.sqrt(p)) * (n / (n + 1)) ** (a / 2)
        tail = rho * term / (1.0 - rho)
        if trace is not None:
            trace.append((n, partial, tail))
        if tail < tol * partial:
            return EvalResult(partial, tail, n, MethodKind.ZETA_P_KSERIES)
    raise ConvergenceError(
        f"zeta_p K-series did not converge in {_KSERIES_MAX_TERMS} terms",
        EvalResult(partial, term, _KSERIES_MAX_TERMS, MethodKind.ZETA_P_KSERIES),
    )


def zeta_p(params: ZetaPParams, tol: float = 1e-12, *, threshold: float = DISPATCH_P_THRESHOLD) -> EvalResult:
    """Dispatch: exact zeta at ``p = 0``, K-series for ``p >= threshold``,
    quadrature in between."""
    if params.p == 0:
        check_tol(tol)
        v = riemann_zeta(params.alpha)
        return EvalResult(v, 4e-16 * v, 1, MethodKind.ZETA)
    if params.p >= threshold:
        return zeta_p_kseries(params, tol)
    return zeta_p_integral(params, tol)


def zeta_p_value(alpha: float, p: float, tol: float = 1e-12, *, threshold: float = DISPATCH_P_THRESHOLD) -> float:
    return zeta_p(ZetaPParams(alpha, p), tol, threshold=threshold).value

