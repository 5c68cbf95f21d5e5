"""Truncation rules shared by the series-type evaluators.

Every summation loop can record a trace: a list that receives one
``(terms, partial, err_estimate)`` tuple per summed term, in ascending order.
The CLI convergence report is built from these traces.
"""

from __future__ import annotations

import math
from typing import Callable, Optional

from ._types import ConvergenceError, DivergenceError, EvalResult, MethodKind

Trace = Optional[list]


def geometric_tail_sum(
    term: Callable[[int], float],
    tol: float,
    method: MethodKind,
    *,
    start: int = 1,
    max_terms: int = 5000,
    min_terms: int = 3,
    trace: Trace = None,
    divergence_window: Optional[int] = None,
    term_err: Optional[Callable[[int], float]] = None,
) -> EvalResult:
    """Sum ``term(k)`` for ``k = start, start+1, ...`` with a geometric tail rule.

    The decay ratio is estimated from the last three terms; the tail is bounded
    by ``m * rho / (1 - rho)`` where ``m`` is the largest of the last three term
    magnitudes (robust to an accidental near-zero term). Summation stops once
    ``|term| + tail < tol * |partial|``.

    ``term_err(k)``, when given, returns the absolute error of the ``k``-th
    term that was just computed; these are accumulated into the estimate.
    """
    partial = 0.0
    comp = 0.0  # Kahan compensation
    mags: list[float] = []
    acc_term_err = 0.0
    rising = 0
    tail = math.inf
    for i in range(max_terms):
        k = start + i
        t = term(k)
        if not math.isfinite(t):
            raise ConvergenceError(f"non-finite term at k={k}")
        if term_err is not None:
            acc_term_err += term_err(k)
        y = t - comp
        s = partial + y
        comp = (s - partial) - y
        partial = s
        a = abs(t)
        if mags and a >= mags[-1] and a > 0:
            rising += 1
        else:
            rising = 0
        mags.append(a)
        if divergence_window and rising >= divergence_window:
            raise DivergenceError(
                f"terms non-decreasing over {divergence_window} consecutive indices at k={k}",
                EvalResult(partial, abs(partial), i + 1, method),
            )
        tail = _tail_estimate(mags)
        if trace is not None:
            trace.append((i + 1, partial, min(tail, 1e300) + acc_term_err))
        if i + 1 >= min_terms and a + tail <= tol * abs(partial):
            return EvalResult(partial, tail + acc_term_err, i + 1, method)
        if partial == 0.0 and i + 1 >= min_terms and max(mags[-3:]) == 0.0:
            return EvalResult(0.0, acc_term_err, i + 1, method)
    err = tail + acc_term_err if math.isfinite(tail) else abs(partial)
    best = EvalResult(partial, err, max_terms, method)
    raise ConvergenceError(f"{method.value}: no convergence within {max_terms} terms", best)


def _tail_estimate(mags: list[float]) -> float:
    if len(mags) < 3:
        return math.inf
    last = mags[-4:]
    ratios = [b / a for a, b in zip(last, last[1:]) if a > 0]
    if not ratios:
        return 0.0
    rho = max(ratios)
    if rho >= 1.0:
        return math.inf
    return max(mags[-3:]) * rho / (1.0 - rho)


def alternating_sum(
    term: Callable[[int], float],
    tol: float,
    method: MethodKind,
    *,
    max_terms: int = 10_000,
    trace: Trace = None,
) -> EvalResult:
    """Sum ``term(n)`` for ``n = 0, 1, ...`` of an eventually alternating series.

    Stops at ``n`` once ``|t_n| < tol * |partial|`` and ``|t_{n+1}| < |t_n|``,
    so a pre-asymptotic growth phase is never mistaken for convergence. The
    error estimate is the first omitted term.
    """
    partial = 0.0
    current = term(0)
    for n in range(max_terms):
        partial += current
        nxt = term(n + 1)
        if not math.isfinite(nxt):
            raise ConvergenceError(f"non-finite term at n={n + 1}")
        if trace is not None:
            trace.append((n + 1, partial, abs(nxt)))
        if abs(current) < tol * abs(partial) and abs(nxt) < abs(current):
            return EvalResult(partial, abs(nxt), n + 1, method)
        current = nxt
    best = EvalResult(partial, abs(current), max_terms, method)
    raise ConvergenceError(f"{method.value}: no convergence within {max_terms} terms", best)
