r"""Canonical evaluations of the p-extended Mathieu series :math:`S_{\mu,p}(r)`.

* :func:`s_series`: the zeta-type power series in ``r`` (``|r| < 1``),
* :func:`s_integral`: the Bessel-integral representation (any ``r > 0``),
  used as the reference for every other method,
* :func:`s_classical`: the defining sum :math:`\sum 2n/(n^2+r^2)^{\mu+1}` at ``p = 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._series import Trace, alternating_sum
from ._types import DomainError, EvalResult, MethodKind, check_tol, clamp_tol
from .quadrature import IntegrandSpec, Oscillator, Weight, integrate_semi_infinite
from .zeta_p import DISPATCH_P_THRESHOLD, ZetaPParams, zeta_p

SERIES_MAX_TERMS = 10_000


@dataclass(frozen=True)
class MathieuParams:
    mu: float
    p: float
    r: float

    def __post_init__(self):
        if not (self.p >= 0 and math.isfinite(self.p)):
            raise DomainError(f"p must satisfy p >= 0, got {self.p!r}")
        if not (self.r > 0 and math.isfinite(self.r)):
            raise DomainError(f"r must satisfy r > 0, got {self.r!r}")
        if not math.isfinite(self.mu):
            raise DomainError(f"mu must be finite, got {self.mu!r}")

    def require_mu(self):
        """Shared domain: mu > 0 when p = 0, mu >= -1/2 when p > 0."""
        if self.p == 0 and not self.mu > 0:
            raise DomainError(f"with p = 0 the series needs mu > 0, got mu={self.mu!r}")
        if self.p > 0 and not self.mu >= -0.5:
            raise DomainError(f"with p > 0 the series needs mu >= -1/2, got mu={self.mu!r}")


def series_term_factory(params: MathieuParams, tol: float, threshold: float = DISPATCH_P_THRESHOLD):
    """Return ``term(n)`` for the zeta-type power series.

    The generalized binomial and ``r**(2n)`` are built incrementally, so terms
    must be requested in ascending ``n``.
    """
    mu, p, r = params.mu, params.p, params.r
    ztol = clamp_tol(tol / 10)
    state = {"n": -1, "coef": 1.0}

    def zp(alpha):
        # 1/Gamma(alpha) vanishes at alpha = 0 while the integral stays finite
        if alpha == 0 and p > 0:
            return 0.0
        return zeta_p(ZetaPParams(alpha, p), ztol, threshold=threshold).value

    def term(n: int) -> float:
        if n != state["n"] + 1:
            raise ValueError("series terms must be requested in ascending order")
        if n > 0:
            state["coef"] *= (mu + n) / n * r * r
        state["n"] = n
        coef = state["coef"]
        if coef == 0.0:
            return 0.0
        sign = -1.0 if n % 2 else 1.0
        return 2.0 * sign * coef * zp(2 * mu + 2 * n + 1)

    return term


def s_series(
    params: MathieuParams,
    tol: float = 1e-10,
    *,
    max_terms: int = SERIES_MAX_TERMS,
    threshold: float = DISPATCH_P_THRESHOLD,
    trace: Trace = None,
) -> EvalResult:
    """Power series in ``r`` with p-extended zeta coefficients.

    Summation continues until the terms are both below ``tol`` relative to the
    partial sum and decreasing; for ``r`` near 1 the terms grow first.
    """
    check_tol(tol)
    if not params.r < 1:
        raise DomainError(f"the power series needs |r| < 1, got r={params.r!r}")
    params.require_mu()
    term = series_term_factory(params, tol, threshold)
    return alternating_sum(term, tol, MethodKind.SERIES_A3, max_terms=max_terms, trace=trace)


def integral_prefactor(mu: float, r: float) -> float:
    return math.sqrt(math.pi) / ((2 * r) ** (mu - 0.5) * math.gamma(mu + 1))


def s_integral(params: MathieuParams, tol: float = 1e-10) -> EvalResult:
    """Bessel-integral representation, valid for every ``r > 0``."""
    check_tol(tol)
    params.require_mu()
    mu, p, r = params.mu, params.p, params.r
    spec = IntegrandSpec(
        sigma=mu + 0.5,
        p=p,
        weight=Weight.BOSE,
        oscillator=Oscillator.BESSEL_J,
        nu=mu - 0.5,
        gamma=r,
    )
    res = integrate_semi_infinite(spec, tol)
    c = integral_prefactor(mu, r)
    return EvalResult(c * res.value, abs(c) * res.err_estimate, res.terms_or_nodes, MethodKind.INTEGRAL_A4)


def _classical_f(x, mu, r):
    return 2.0 * x * (x * x + r * r) ** (-mu - 1.0)


def _classical_f1(x, mu, r):
    u = x * x + r * r
    m = mu + 1.0
    return 2.0 * u**-m - 4.0 * m * x * x * u ** (-m - 1.0)


def _classical_f2(x, mu, r):
    u = x * x + r * r
    m = mu + 1.0
    return -12.0 * m * x * u ** (-m - 1.0) + 8.0 * m * (m + 1.0) * x**3 * u ** (-m - 2.0)


def s_classical(mu: float, r: float, tol: float = 1e-12) -> EvalResult:
    r"""Direct summation of :math:`\sum_{n\ge1} 2n/(n^2+r^2)^{\mu+1}`.

    The sum is taken to ``N - 1``; the tail from ``N`` on is the integral
    :math:`(N^2+r^2)^{-\mu}/\mu` plus Euler--Maclaurin corrections
    :math:`f(N)/2 - f'(N)/12`. The reported error is the remainder bound
    :math:`2\zeta(3)/(2\pi)^3 \, |f''(N)|`, valid once ``N`` is past the
    region where the derivatives of ``f`` change sign (``N >= 10 r``).
    """
    check_tol(tol)
    if not mu > 0:
        raise DomainError(f"classical Mathieu series needs mu > 0, got {mu!r}")
    if not r > 0:
        raise DomainError(f"classical Mathieu series needs r > 0, got {r!r}")
    rem_const = 2.0 * 1.2020569031595942 / (2 * math.pi) ** 3
    N = max(64, int(math.ceil(10 * r)))
    while True:
        n = np.arange(1, N, dtype=float)
        head = math.fsum(_classical_f(n, mu, r))
        tail = (N * N + r * r) ** (-mu) / mu + _classical_f(N, mu, r) / 2 - _classical_f1(N, mu, r) / 12
        value = head + tail
        err = rem_const * abs(_classical_f2(N, mu, r)) + 4e-16 * abs(value)
        if err <= tol * value or N > 1 << 24:
            return EvalResult(value, err, N, MethodKind.CLASSICAL)
        N *= 2
