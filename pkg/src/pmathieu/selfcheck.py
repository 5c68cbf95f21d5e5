"""Fast invariant suite behind ``pmathieu selfcheck``."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .gl_derivative import nth_derivative
from .mathieu_core import MathieuParams, s_classical, s_integral, s_series
from .schlomilch import repr_b3
from .special_kernels import bessel_j, bessel_k_complex, bessel_k_real
from .zeta_p import ZetaPParams, zeta_p_integral, zeta_p_kseries

FAULTS = ("k-parity",)


@dataclass(frozen=True)
class CheckResult:
    name: str
    measured: float
    tolerated: float

    @property
    def passed(self) -> bool:
        return math.isfinite(self.measured) and self.measured <= self.tolerated


def product_rule_lhs(x: float, h: Optional[float] = None) -> float:
    """``2 d/dx [J1(x) K1(x)]`` by a five-point central difference."""
    h = h or min(1e-3, x / 4)

    def g(t):
        return bessel_j(1, t) * bessel_k_real(1, t)

    return 2.0 * (g(x - 2 * h) - 8 * g(x - h) + 8 * g(x + h) - g(x + 2 * h)) / (12 * h)


def product_rule_rhs(x: float) -> float:
    return (bessel_j(0, x) - bessel_j(2, x)) * bessel_k_real(1, x) - bessel_j(1, x) * (
        bessel_k_real(0, x) + bessel_k_real(2, x)
    )


def _k_parity(k_real: Callable[[float, float], float]) -> CheckResult:
    worst = 0.0
    for nu in (0.3, 1.0, 2.5, 7.0):
        for x in np.linspace(0.1, 50.0, 25):
            worst = max(worst, abs(k_real(-nu, x) - k_real(nu, x)))
    return CheckResult("k-parity", worst, 0.0)


def _j_parity() -> CheckResult:
    worst = max(abs(bessel_j(-1, x) + bessel_j(1, x)) for x in np.linspace(0.1, 50.0, 50))
    return CheckResult("j-parity", worst, 1e-12)


def _j_recurrence() -> CheckResult:
    worst = 0.0
    for nu in (0.5, 1.0, 2.3, 6.0):
        for x in np.linspace(0.5, 40.0, 40):
            res = bessel_j(nu + 1, x) - (2 * nu / x) * bessel_j(nu, x) + bessel_j(nu - 1, x)
            worst = max(worst, abs(res))
    return CheckResult("j-recurrence", worst, 1e-10)


def _k_reflection() -> CheckResult:
    worst = 0.0
    for n in (0, 1, 2, 3):
        for re in (0.05, 0.7, 3.0, 20.0):
            for im in (-15.0, -1.0, 0.3, 4.0):
                z = complex(re, im)
                a = bessel_k_complex(n, z.conjugate())
                b = bessel_k_complex(n, z).conjugate()
                worst = max(worst, abs(a - b) / abs(b))
    return CheckResult("k-complex-reflection", worst, 1e-12)


def _product_rule() -> CheckResult:
    worst = max(abs(product_rule_lhs(x) - product_rule_rhs(x)) for x in np.linspace(0.1, 20.0, 50))
    return CheckResult("jk-product-rule", worst, 1e-7)


def _gl_eigen() -> CheckResult:
    worst = 0.0
    for n in (1, 2, 3):
        for q in (0.5, 1.0, 2.0):
            for x in (0.3, 1.0, 2.5):
                d = nth_derivative(lambda s: np.exp(-s * x), q, n, 0.05)
                exact = (-x) ** n * math.exp(-q * x)
                worst = max(worst, abs(d.value - exact) / abs(exact))
    return CheckResult("gl-eigen", worst, 1e-7)


def _zeta_cross() -> CheckResult:
    worst = 0.0
    for a, p in ((0.5, 0.1), (1.0, 2.0), (3.0, 1.0), (5.0, 10.0)):
        i = zeta_p_integral(ZetaPParams(a, p), 1e-13).value
        k = zeta_p_kseries(ZetaPParams(a, p), 1e-13).value
        worst = max(worst, abs(i - k) / abs(k))
    return CheckResult("zeta-p-cross", worst, 1e-10)


def _p0_reduction() -> CheckResult:
    worst = 0.0
    for mu, r in ((0.5, 0.5), (2.0, 0.9)):
        c = s_classical(mu, r, 1e-12).value
        for v in (s_series(MathieuParams(mu, 0.0, r), 1e-12).value, s_integral(MathieuParams(mu, 0.0, r), 1e-12).value):
            worst = max(worst, abs(v - c) / c)
    return CheckResult("p0-reduction", worst, 1e-9)


def _b3_cross() -> CheckResult:
    ref = s_integral(MathieuParams(0.0, 1.0, 0.5), 1e-11).value
    val = repr_b3(1.0, 0.5, 1e-12).value
    return CheckResult("schlomilch-b3", abs(val - ref) / abs(ref), 1e-8)


def run_invariants(fault: Optional[str] = None) -> list[CheckResult]:
    """Run every invariant group; ``fault`` injects a known defect for testing."""
    if fault is not None and fault not in FAULTS:
        raise ValueError(f"unknown fault {fault!r}")
    k_real = bessel_k_real
    if fault == "k-parity":
        def k_real(nu, x):
            v = bessel_k_real(nu, x)
            return -v if nu < 0 else v
    return [
        _k_parity(k_real),
        _j_parity(),
        _j_recurrence(),
        _k_reflection(),
        _product_rule(),
        _gl_eigen(),
        _zeta_cross(),
        _p0_reduction(),
        _b3_cross(),
    ]

