r"""Semi-infinite integrals of Laplace/Bose type with oscillatory factors.

Integrands have the shape

.. math::
    t^\sigma \, e^{-p/t} \, w(t) \, g(t), \qquad t \in (0, \infty),

with weight :math:`w(t) = 1/(e^t - 1)` (Bose) or :math:`e^{-qt}` and
oscillator :math:`g \in \{1, J_\nu(\gamma t), \cos \gamma t, \sin \gamma t\}`.

Strategy: the range is cut at the oscillator's zeros (McMahon estimates for
Bessel zeros) up to a cutoff ``T`` beyond which the exponential envelope is
negligible; each panel is integrated by adaptive Gauss--Kronrod (QUADPACK via
:func:`scipy.integrate.quad`). The first panel is mapped through
:math:`t = e^u` so the :math:`e^{-p/t}` essential singularity becomes a smooth
double-exponential decay. When the panel budget is exhausted the panel partial
sums are extrapolated with Wynn's epsilon algorithm.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate
from scipy import special as sp

from ._series import Trace, geometric_tail_sum
from ._types import ConvergenceError, DomainError, EvalResult, MethodKind, check_tol

# log(1e-18): panels beyond this envelope drop are not integrated.
_ENVELOPE_DROP = 41.5
_MAX_PANELS = 4000


class Weight(enum.Enum):
    BOSE = "bose"
    EXP = "exp"


class Oscillator(enum.Enum):
    NONE = "none"
    BESSEL_J = "bessel_j"
    COS = "cos"
    SIN = "sin"


@dataclass(frozen=True)
class IntegrandSpec:
    """Parameters of :math:`t^\\sigma e^{-p/t} w(t) g(t)`.

    ``q`` is used only with the exponential weight; ``nu`` and ``gamma`` only
    with an active oscillator. ``log_scale`` is subtracted inside the
    exponent, which keeps integrands such as :math:`t^{\\alpha-1}/\\Gamma(\\alpha)`
    finite for large powers.
    """

    sigma: float
    p: float = 0.0
    weight: Weight = Weight.BOSE
    q: float = 1.0
    oscillator: Oscillator = Oscillator.NONE
    nu: float = 0.0
    gamma: float = 0.0
    log_scale: float = 0.0

    def __post_init__(self):
        if not self.p >= 0:
            raise DomainError(f"p must be >= 0, got {self.p!r}")
        if self.weight is Weight.EXP and not self.q > 0:
            raise DomainError(f"exponential weight needs q > 0, got {self.q!r}")
        if self.oscillator is not Oscillator.NONE and not self.gamma > 0:
            raise DomainError(f"oscillator frequency must be > 0, got {self.gamma!r}")
        if self.p == 0 and self.small_t_exponent() <= -1:
            raise DomainError(
                "integrand is not integrable at t=0: "
                f"small-t exponent {self.small_t_exponent():g} <= -1 with p = 0"
            )

    @property
    def decay(self) -> float:
        return 1.0 if self.weight is Weight.BOSE else self.q

    def small_t_exponent(self) -> float:
        e = self.sigma
        if self.weight is Weight.BOSE:
            e -= 1.0
        if self.oscillator is Oscillator.SIN:
            e += 1.0
        elif self.oscillator is Oscillator.BESSEL_J:
            nu = self.nu
            e += abs(nu) if nu < 0 and nu == round(nu) else nu
        return e

    def log_envelope(self, t):
        return self.sigma * np.log(t) - self.p / t - self.decay * t - self.log_scale

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            if self.weight is Weight.BOSE:
                val = np.exp(self.log_envelope(t)) / -np.expm1(-t)
            else:
                val = np.exp(self.log_envelope(t))
            if self.oscillator is Oscillator.BESSEL_J:
                val = val * sp.jv(self.nu, self.gamma * t)
            elif self.oscillator is Oscillator.COS:
                val = val * np.cos(self.gamma * t)
            elif self.oscillator is Oscillator.SIN:
                val = val * np.sin(self.gamma * t)
        return np.where(t > 0, val, 0.0)


def oscillator_zeros(spec: IntegrandSpec, upto: float) -> np.ndarray:
    """Approximate positive zeros of the oscillator below ``upto``."""
    g = spec.gamma
    if spec.oscillator is Oscillator.NONE:
        return np.empty(0)
    kmax = int(upto * g / math.pi) + 2
    k = np.arange(1, kmax + 1, dtype=float)
    if spec.oscillator is Oscillator.COS:
        z = (k - 0.5) * math.pi
    elif spec.oscillator is Oscillator.SIN:
        z = k * math.pi
    else:
        nu = abs(spec.nu) if spec.nu < 0 and spec.nu == round(spec.nu) else spec.nu
        beta = (k + nu / 2 - 0.25) * math.pi
        z = beta - (4 * nu * nu - 1) / (8 * beta)
    z = z / g
    z = z[(z > 0) & (z < upto)]
    # McMahon can misorder the first few zeros of high orders
    return np.unique(z)


def _cutoffs(spec: IntegrandSpec) -> tuple[float, float, float]:
    """Return (mode, reference log-envelope, cutoff T)."""
    c, s, p = spec.decay, spec.sigma, spec.p
    disc = s * s + 4 * c * p
    mode = (s + math.sqrt(disc)) / (2 * c) if disc >= 0 else 0.0
    t_ref = max(mode, 1.0 / c)
    l_ref = float(spec.log_envelope(t_ref))
    target = l_ref - _ENVELOPE_DROP
    lo, hi = t_ref, t_ref + 1.0 / c
    while spec.log_envelope(hi) > target:
        lo, hi = hi, hi + 2 * (hi - t_ref) + 1.0 / c
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if spec.log_envelope(mid) > target:
            lo = mid
        else:
            hi = mid
    return mode, l_ref, hi


def _tail_bound(spec: IntegrandSpec, T: float) -> float:
    c, s, p = spec.decay, spec.sigma, spec.p
    rate = c - max(s, 0.0) / T - p / (T * T)
    if rate <= 0:
        return math.inf
    amp = 1.0
    if spec.weight is Weight.BOSE:
        amp /= -math.expm1(-T)
    if spec.oscillator is Oscillator.BESSEL_J and spec.nu < 0 and spec.gamma * T < 1:
        amp *= 10.0
    return amp * math.exp(float(spec.log_envelope(T))) / rate


def _first_panel(spec: IntegrandSpec, t0: float, epsrel: float):
    """Integrate over (0, t0] in the variable u = log t."""
    def g(u):
        t = math.exp(u)
        return float(spec(t)) * t

    u_hi = math.log(t0)
    if spec.p > 0:
        u_lo = math.log(spec.p / 745.0)
    else:
        e = spec.small_t_exponent() + 1.0
        u_lo = u_hi - 745.0 / e
    u_lo = min(u_lo, u_hi - 1.0)
    return integrate.quad(g, u_lo, u_hi, epsabs=0.0, epsrel=epsrel, limit=400)


def _wynn_epsilon(s: list[float]) -> tuple[float, float]:
    """Wynn epsilon extrapolation of a sequence of partial sums.

    Returns the extrapolated limit and the gap to the previous estimate.
    """
    n = len(s)
    e_prev = [0.0] * (n + 1)
    e_curr = list(s)
    estimates = [s[-1]]
    for k in range(1, n):
        nxt = []
        for i in range(len(e_curr) - 1):
            diff = e_curr[i + 1] - e_curr[i]
            if diff == 0:
                nxt.append(math.inf)
            else:
                nxt.append(e_prev[i + 1] + 1.0 / diff)
        e_prev, e_curr = e_curr, nxt
        if k % 2 == 0 and e_curr and math.isfinite(e_curr[-1]):
            estimates.append(e_curr[-1])
        if len(e_curr) < 2:
            break
    if len(estimates) < 2:
        return s[-1], abs(s[-1] - s[-2])
    return estimates[-1], abs(estimates[-1] - estimates[-2])


def integrate_semi_infinite(
    spec: IntegrandSpec,
    tol: float = 1e-10,
    *,
    cutoff_scale: float = 1.0,
    max_panels: int = _MAX_PANELS,
) -> EvalResult:
    """Integrate ``spec`` over :math:`(0, \\infty)`.

    Parameters
    ----------
    spec : IntegrandSpec
    tol : float
        Requested relative accuracy, in ``[1e-14, 1e-4]``.
    cutoff_scale : float
        Multiplies the envelope cutoff ``T`` (used to probe truncation).
    max_panels : int
        Panel budget; past it the remaining tail is extrapolated.

    Returns
    -------
    EvalResult
        ``err_estimate`` is the sum of the per-panel quadrature estimates plus
        the envelope tail bound beyond ``T``.

    Raises
    ------
    ConvergenceError
        If the reported error exceeds ``tol`` relative to the result.
    """
    check_tol(tol)
    mode, l_ref, T = _cutoffs(spec)
    T *= cutoff_scale
    epsrel = max(tol / 10, 2e-14)

    zeros = oscillator_zeros(spec, T)
    width = 10.0 / spec.decay
    t0 = min(zeros[0] if zeros.size else math.inf, max(mode, 1.0 / spec.decay), T)
    edges = [t0]
    for z in list(zeros[zeros > t0]) + [T]:
        while z - edges[-1] > width:
            edges.append(edges[-1] + width)
        if z > edges[-1]:
            edges.append(float(z))

    total_err = 0.0
    partials = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err = _first_panel(spec, t0, epsrel)
        total = val
        total_err += err
        partials.append(total)
        accelerated = False
        for a, b in zip(edges, edges[1:]):
            if len(partials) >= max_panels:
                accelerated = True
                break
            val, err = integrate.quad(spec, a, b, epsabs=0.0, epsrel=epsrel, limit=200)
            total += val
            total_err += err
            partials.append(total)

    if accelerated:
        # extrapolate from partial sums taken at oscillator zeros
        tail_seq = partials[-40:]
        total, gap = _wynn_epsilon(tail_seq)
        total_err += gap
    else:
        total_err += _tail_bound(spec, edges[-1])

    scale = math.exp(l_ref) * max(mode, 1.0 / spec.decay)
    result = EvalResult(total, total_err, len(partials), MethodKind.QUADRATURE)
    if not math.isfinite(total_err) or total_err > tol * max(abs(total), 1e-8 * scale):
        raise ConvergenceError(
            f"quadrature error estimate {total_err:.3g} exceeds tol {tol:g} (value {total:.6g})",
            result,
        )
    return result


def laplace_term_sum(
    spec: IntegrandSpec,
    closed_form: Callable[[int], float],
    tol: float = 1e-10,
    *,
    max_terms: int = 1_000_000,
    trace: Trace = None,
) -> EvalResult:
    """Sum the termwise Laplace expansion of a Bose-weighted integral.

    Uses :math:`1/(e^t-1) = \\sum_{k\\ge1} e^{-kt}`: ``closed_form(k)`` must
    return the exact integral with the Bose weight replaced by :math:`e^{-kt}`.
    Truncation follows the geometric tail rule; ten consecutive non-decreasing
    terms raise :class:`~pmathieu.DivergenceError`.
    """
    if spec.weight is not Weight.BOSE:
        raise DomainError("laplace_term_sum expands the Bose weight only")
    check_tol(tol)
    res = geometric_tail_sum(
        lambda k: float(closed_form(k)),
        tol,
        MethodKind.LAPLACE_SUM,
        max_terms=max_terms,
        trace=trace,
        divergence_window=10,
    )
    return res
