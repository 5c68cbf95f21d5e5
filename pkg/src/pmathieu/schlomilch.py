r"""Schlömilch-series representations of :math:`S_{\mu,p}(\gamma)`.

Two families:

* sums over ``k >= 1`` of q-derivatives of products :math:`J_\nu(z_-)K_\nu(z_+)`
  at ``q = k``, with :math:`z_\pm = \sqrt{2p}\,[\sqrt{q^2+\gamma^2} \pm q]^{1/2}`
  (:func:`repr_thm1_integer`, :func:`repr_b1`, :func:`repr_b2`);
* conjugate-pair sums of :math:`K_{\nu}(2\sqrt{p(k \pm i\gamma)})`
  (:func:`repr_b3`, :func:`repr_b4`, :func:`repr_b7`).

Both come from expanding the Bose weight as :math:`\sum_k e^{-kt}` and using
closed-form Laplace transforms (:func:`kernel_A`, :func:`kernel_B`,
:func:`kernel_E`).
"""

from __future__ import annotations

import cmath
import enum
import math
from typing import Callable, NamedTuple

from ._series import Trace, geometric_tail_sum
from ._types import (
    ConvergenceError,
    DomainError,
    EvalResult,
    InternalConsistencyError,
    MethodKind,
    check_tol,
)
from .gl_derivative import GLConfig, gl_fractional, nth_derivative
from .special_kernels import bessel_j, bessel_k_complex, bessel_k_real

SCHLOMILCH_MAX_TERMS = 5000
KERNEL_E_RESIDUE_TOL = 1e-8
PAIR_RESIDUE_TOL = 1e-10


class TrigKind(enum.Enum):
    SIN = "sin"
    COS = "cos"


class ZPair(NamedTuple):
    z_minus: float
    z_plus: float


def z_pair(p: float, q: float, gamma: float) -> ZPair:
    """Arguments :math:`z_\\pm`; :math:`z_-` is formed without cancellation."""
    s = math.hypot(q, gamma)
    plus = s + q
    minus = gamma * gamma / plus
    c = math.sqrt(2.0 * p)
    return ZPair(c * math.sqrt(minus), c * math.sqrt(plus))


def _positive(**kw):
    for name, v in kw.items():
        if not (v > 0 and math.isfinite(v)):
            raise DomainError(f"{name} must be > 0, got {v!r}")


def kernel_A(p: float, q: float, gamma: float, nu: float) -> float:
    r""":math:`\int_0^\infty x^{-1} e^{-qx-p/x} J_\nu(\gamma x)\,dx = 2 J_\nu(z_-) K_\nu(z_+)`."""
    _positive(p=p, q=q, gamma=gamma)
    zm, zp = z_pair(p, q, gamma)
    return 2.0 * bessel_j(nu, zm) * bessel_k_real(nu, zp)


def kernel_B(p: float, q: float, gamma: float) -> float:
    r""":math:`\int_0^\infty x^{-2} e^{-qx-p/x} J_0(\gamma x)\,dx`."""
    _positive(p=p, q=q, gamma=gamma)
    zm, zp = z_pair(p, q, gamma)
    return 2.0 * gamma * (
        bessel_j(1, zm) * bessel_k_real(0, zp) / zp + bessel_j(0, zm) * bessel_k_real(1, zp) / zm
    )


def _twins(order: int, p: float, q: float, gamma: float, power: float) -> tuple[complex, complex]:
    """:math:`K_n(2\\sqrt{p s})/s^{power}` at ``s = q + i gamma`` and its conjugate."""
    out = []
    for s in (complex(q, gamma), complex(q, -gamma)):
        out.append(bessel_k_complex(order, 2.0 * cmath.sqrt(p * s)) / s**power)
    return out[0], out[1]


def kernel_E_complex(p: float, q: float, gamma: float, nu: int, kind: TrigKind) -> complex:
    r"""Closed form of :math:`\int_0^\infty x^\nu e^{-qx-p/x} \{\sin,\cos\}(\gamma x)\,dx`
    before discarding the (theoretically zero) imaginary part."""
    _positive(p=p, q=q, gamma=gamma)
    if int(nu) != nu or not -1 <= nu <= 7:
        raise DomainError(f"kernel_E needs integer nu in [-1, 7], got {nu!r}")
    a = (nu + 1) / 2.0
    t_plus, t_minus = _twins(int(nu) + 1, p, q, gamma, a)
    if kind is TrigKind.SIN:
        return 1j * p**a * (t_plus - t_minus)
    return p**a * (t_plus + t_minus)


def kernel_E(p: float, q: float, gamma: float, nu: int, kind: TrigKind) -> float:
    z = kernel_E_complex(p, q, gamma, nu, kind)
    twin_scale = abs(p ** ((nu + 1) / 2.0) * bessel_k_complex(int(nu) + 1, 2.0 * cmath.sqrt(p * complex(q, gamma))))
    if abs(z.imag) > KERNEL_E_RESIDUE_TOL * max(abs(z.real), 1e-3 * twin_scale):
        raise InternalConsistencyError(f"kernel_E imaginary residue {z.imag:.3g} vs value {z.real:.3g}")
    return z.real


def derivative_step(p: float) -> float:
    return 0.05 * min(1.0, 1.0 / math.sqrt(p))


def _derivative_sum(
    F: Callable[[float], float],
    order: int,
    prefactor: float,
    p: float,
    tol: float,
    method: MethodKind,
    max_terms: int,
    trace: Trace,
) -> EvalResult:
    h0 = derivative_step(p)
    errs: dict[int, float] = {}

    def term(k):
        try:
            d = nth_derivative(F, float(k), order, h0)
        except ConvergenceError as exc:
            raise ConvergenceError(f"{method.value}: derivative failed at k={k}: {exc}", exc.best) from exc
        errs[k] = abs(prefactor) * d.err_estimate
        return prefactor * d.value

    res = geometric_tail_sum(term, tol, method, max_terms=max_terms, trace=trace, term_err=lambda k: errs[k])
    return res


def repr_thm1_integer(
    n: int,
    p: float,
    gamma: float,
    tol: float = 1e-10,
    *,
    max_terms: int = SCHLOMILCH_MAX_TERMS,
    trace: Trace = None,
) -> EvalResult:
    r""":math:`S_{n-3/2,p}(\gamma)` from n-th q-derivatives of
    :math:`J_{n-2}(z_-)K_{n-2}(z_+)`, ``n in {2, 3, 4}``."""
    check_tol(tol)
    if n not in (2, 3, 4):
        raise DomainError(f"derivative order n must be 2, 3 or 4, got {n!r}")
    _positive(p=p, gamma=gamma)
    nu = n - 2

    def F(q):
        zm, zp = z_pair(p, q, gamma)
        return bessel_j(nu, zm) * bessel_k_real(nu, zp)

    c = 2.0 * (-1) ** n * math.sqrt(math.pi) / ((2 * gamma) ** (n - 2) * math.gamma(n - 0.5))
    return _derivative_sum(F, n, c, p, tol, MethodKind.THM1_INT, max_terms, trace)


def repr_b1(p: float, gamma: float, tol: float = 1e-10, *, max_terms: int = SCHLOMILCH_MAX_TERMS, trace: Trace = None) -> EvalResult:
    r""":math:`S_{1/2,p}(\gamma)` from third q-derivatives of
    :math:`z_+^{-1}J_1(z_-)K_0(z_+) + z_-^{-1}J_0(z_-)K_1(z_+)`."""
    check_tol(tol)
    _positive(p=p, gamma=gamma)

    def F(q):
        zm, zp = z_pair(p, q, gamma)
        return bessel_j(1, zm) * bessel_k_real(0, zp) / zp + bessel_j(0, zm) * bessel_k_real(1, zp) / zm

    return _derivative_sum(F, 3, -4.0 * gamma, p, tol, MethodKind.B1, max_terms, trace)


def _b2_analytic_derivative(p: float, q: float, gamma: float) -> float:
    # d/dq [J1(z-) K1(z+)] with J1' = (J0 - J2)/2, K1' = -(K0 + K2)/2, dz±/dq = ±z±/(2s)
    zm, zp = z_pair(p, q, gamma)
    s = math.hypot(q, gamma)
    dj = 0.5 * (bessel_j(0, zm) - bessel_j(2, zm))
    dk = -0.5 * (bessel_k_real(0, zp) + bessel_k_real(2, zp))
    return dj * (-zm / (2 * s)) * bessel_k_real(1, zp) + bessel_j(1, zm) * dk * (zp / (2 * s))


def repr_b2(
    p: float,
    gamma: float,
    tol: float = 1e-10,
    *,
    derivative: str = "numeric",
    max_terms: int = SCHLOMILCH_MAX_TERMS,
    trace: Trace = None,
) -> EvalResult:
    r""":math:`S_{-1/2,p}(\gamma)` from first q-derivatives of :math:`J_1(z_-)K_1(z_+)`.

    ``derivative="analytic"`` replaces the finite differences by the product
    rule :math:`2(J_1K_1)' = (J_0-J_2)K_1 - J_1(K_0+K_2)` applied through
    the chain rule on :math:`z_\pm`.
    """
    check_tol(tol)
    _positive(p=p, gamma=gamma)
    if derivative == "analytic":
        return geometric_tail_sum(
            lambda k: 4.0 * gamma * _b2_analytic_derivative(p, float(k), gamma),
            tol,
            MethodKind.B2,
            max_terms=max_terms,
            trace=trace,
        )
    if derivative != "numeric":
        raise DomainError(f"unknown derivative mode {derivative!r}")

    def F(q):
        zm, zp = z_pair(p, q, gamma)
        return bessel_j(1, zm) * bessel_k_real(1, zp)

    return _derivative_sum(F, 1, 4.0 * gamma, p, tol, MethodKind.B2, max_terms, trace)


def _pair_sum(term_pair: Callable[[int], complex], tol, method, max_terms, trace) -> EvalResult:
    worst = [0.0]

    def term(k):
        z = term_pair(k)
        res = abs(z.imag) / max(abs(z.real), 1e-300)
        worst[0] = max(worst[0], res)
        if res > PAIR_RESIDUE_TOL:
            raise InternalConsistencyError(
                f"{method.value}: imaginary residue {res:.3g} at k={k} exceeds {PAIR_RESIDUE_TOL:g}"
            )
        return z.real

    res = geometric_tail_sum(term, tol, method, max_terms=max_terms, trace=trace)
    return EvalResult(res.value, res.err_estimate, res.terms_or_nodes, method, imag_residue=worst[0])


def b3_term(p: float, gamma: float, k: int) -> complex:
    t_plus, t_minus = _twins(1, p, k, gamma, 0.5)
    return 2.0 * math.sqrt(p) * (t_plus + t_minus)


def b4_term(p: float, gamma: float, k: int) -> complex:
    # (k ± i gamma) to the first power; a square root here gives a different value
    t_plus, t_minus = _twins(2, p, k, gamma, 1.0)
    return (1j * p / gamma) * (t_plus - t_minus)


def k3_cos_term(p: float, r: float, n: int) -> complex:
    t_plus, t_minus = _twins(3, p, n, r, 1.5)
    return p**1.5 / (2 * r) ** 2 * (t_plus + t_minus)


def repr_b3(p: float, gamma: float, tol: float = 1e-10, *, max_terms: int = SCHLOMILCH_MAX_TERMS, trace: Trace = None) -> EvalResult:
    r""":math:`S_{0,p}(\gamma)` as a conjugate-pair series of :math:`K_1`."""
    check_tol(tol)
    _positive(p=p, gamma=gamma)
    return _pair_sum(lambda k: b3_term(p, gamma, k), tol, MethodKind.B3, max_terms, trace)


def repr_b4(p: float, gamma: float, tol: float = 1e-10, *, max_terms: int = SCHLOMILCH_MAX_TERMS, trace: Trace = None) -> EvalResult:
    r""":math:`S_{1,p}(\gamma)` as a conjugate-pair series of :math:`K_2`."""
    check_tol(tol)
    _positive(p=p, gamma=gamma)
    return _pair_sum(lambda k: b4_term(p, gamma, k), tol, MethodKind.B4, max_terms, trace)


def cosine_k3_sum(p: float, r: float, tol: float = 1e-10, *, max_terms: int = SCHLOMILCH_MAX_TERMS) -> EvalResult:
    r""":math:`p^{3/2}(2r)^{-2}\sum_n [K_3(2\sqrt{p(n+ir)})/(n+ir)^{3/2} + \text{conj.}]`."""
    check_tol(tol)
    _positive(p=p, r=r)
    return _pair_sum(lambda n: k3_cos_term(p, r, n), tol, MethodKind.B7, max_terms, None)


def repr_b7(p: float, r: float, tol: float = 1e-10, *, max_terms: int = SCHLOMILCH_MAX_TERMS, trace: Trace = None) -> EvalResult:
    r""":math:`S_{2,p}(r) = (2r)^{-2} S_{1,p}(r) - {}` the :math:`K_3` cosine sum.

    The two series are merged term by term, which keeps a single truncation
    point and a single convergence trace.
    """
    check_tol(tol)
    _positive(p=p, r=r)
    scale = 1.0 / (2 * r) ** 2
    return _pair_sum(lambda n: scale * b4_term(p, r, n) - k3_cos_term(p, r, n), tol, MethodKind.B7, max_terms, trace)


def repr_thm1_fractional(
    alpha: float,
    p: float,
    gamma: float,
    tol: float = 1e-6,
    *,
    max_terms: int = 400,
    gl_config: GLConfig | None = None,
    experimental: bool = False,
) -> EvalResult:
    r"""Experimental: :math:`S_{\alpha-3/2,p}(\gamma)` for non-integer ``alpha``.

    Each term needs the right-sided (Weyl) derivative of order ``alpha`` of
    :math:`F(q) = J_{\alpha-2}(z_-)K_{\alpha-2}(z_+)`, computed as the
    Grünwald--Letnikov integral of order ``m - alpha`` (``m = ceil(alpha)``)
    of :math:`(-1)^m F^{(m)}`, reflected so the base point lies at
    ``q + L``. The sign factor is taken so the result is real, which
    reproduces the integer-order formula at integer ``alpha``. Slow and only
    modestly accurate; no accuracy guarantee is attached, so callers must
    opt in with ``experimental=True``.
    """
    if not experimental:
        raise DomainError("non-integer orders are experimental; pass experimental=True")
    _positive(p=p, gamma=gamma)
    if not alpha > 0.5:
        raise DomainError(f"alpha must exceed 1/2, got {alpha!r}")
    m = math.ceil(alpha)
    nu = alpha - 2.0
    if m > 4:
        raise DomainError("experimental branch supports alpha <= 4")

    def F(q):
        zm, zp = z_pair(p, q, gamma)
        return bessel_j(nu, zm) * bessel_k_real(nu, zp)

    h0 = derivative_step(p)
    beta = m - alpha
    c = 2.0 * math.sqrt(math.pi) / ((2 * gamma) ** (alpha - 2) * math.gamma(alpha - 0.5))

    def weyl(q):
        def dm(q_):
            return (-1) ** m * nth_derivative(F, q_, m, h0).value
        if beta == 0:
            return dm(q)
        # decay of F ~ exp(-2 sqrt(p q)); choose L so the window drops ~e^-20
        L = (10.0 / math.sqrt(p) + math.sqrt(q)) ** 2 - q
        cfg = gl_config or GLConfig(a=-q - L, n_levels=4, n_base=64)
        cfg = GLConfig(a=-q - L, n_levels=cfg.n_levels, n_base=cfg.n_base)
        try:
            return gl_fractional(lambda s: dm(-s), -q, beta, cfg).value
        except ConvergenceError as exc:
            # derivative noise stalls the Richardson diagonal; keep the best level
            return exc.best.value

    return geometric_tail_sum(lambda k: c * weyl(float(k)), tol, MethodKind.THM1_INT, max_terms=max_terms)
