"""Command-line front end: ``pmathieu compute|compare|convergence|zeta-p|gl-check|selfcheck``.

Exit codes: 0 success, 1 usage error, 2 domain error, 3 convergence failure,
internal inconsistency or cross-method disagreement.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import asdict, dataclass, fields
from typing import Callable, Optional

import numpy as np
from scipy import integrate

from ._types import ConvergenceError, DivergenceError, DomainError, EvalResult, InternalConsistencyError
from .gl_derivative import GLConfig, gl_fractional, laplace_base_point, nth_derivative
from .mathieu_core import SERIES_MAX_TERMS, MathieuParams, s_integral, s_series
from .schlomilch import SCHLOMILCH_MAX_TERMS, repr_b1, repr_b2, repr_b3, repr_b4, repr_b7, repr_thm1_integer
from .selfcheck import FAULTS, run_invariants
from .zeta_p import DISPATCH_P_THRESHOLD, ZetaPParams, zeta_p

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_FAIL = 0, 1, 2, 3

METHODS = ("series", "integral", "thm1", "b1", "b2", "b3", "b4", "b7")
SCHLOMILCH_MU = {-0.5: "b2", 0.0: "b3", 0.5: "thm1", 1.0: "b4", 1.5: "thm1", 2.0: "b7"}
SINGLE_MU = {"b1": 0.5, "b2": -0.5, "b3": 0.0, "b4": 1.0, "b7": 2.0}
THM1_MU = (0.5, 1.5, 2.5)
ENFORCED_REL = 1e-8
CSV_HEADER = ["method", "mu", "p", "r", "value", "err_estimate", "terms", "elapsed_ns"]
# relative perturbation used by the hidden compare fault hook
_FAULT_SHIFT = 1e-6


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


# ---------------------------------------------------------------- records


def fmt_num(v) -> str:
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    v = float(v)
    if not math.isfinite(v):
        return "null"
    return format(v, ".17g")


@dataclass(frozen=True)
class OutputRecord:
    method: str
    mu: float
    p: float
    r: float
    value: float
    err_estimate: float
    terms: int
    elapsed_ns: int

    def to_json(self) -> str:
        parts = [f'"method": {json.dumps(self.method)}']
        for f in fields(self)[1:]:
            parts.append(f'"{f.name}": {fmt_num(getattr(self, f.name))}')
        return "{" + ", ".join(parts) + "}"

    @classmethod
    def from_json(cls, text_or_obj) -> "OutputRecord":
        obj = json.loads(text_or_obj) if isinstance(text_or_obj, str) else text_or_obj
        return cls(
            method=str(obj["method"]),
            mu=float(obj["mu"]),
            p=float(obj["p"]),
            r=float(obj["r"]),
            value=float(obj["value"]),
            err_estimate=float(obj["err_estimate"]),
            terms=int(obj["terms"]),
            elapsed_ns=int(obj["elapsed_ns"]),
        )

    def csv_row(self) -> list[str]:
        return [self.method] + [fmt_num(getattr(self, f.name)) for f in fields(self)[1:]]


def _csv_text(header: Optional[list[str]], rows: list[list[str]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if header:
        w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


# ---------------------------------------------------------------- settings


@dataclass
class Settings:
    tol: float = 1e-10
    max_terms: Optional[int] = None
    dispatch_p_threshold: float = DISPATCH_P_THRESHOLD


def load_config(path: str) -> dict:
    """Parse ``key=value`` lines (``#`` comments allowed)."""
    casts = {"tol": float, "max_terms": int, "dispatch_p_threshold": float}
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}") from exc
    for no, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        key = key.strip()
        if not sep or key not in casts:
            raise UsageError(f"{path}:{no}: expected one of {sorted(casts)} as key=value")
        try:
            out[key] = casts[key](val.strip())
        except ValueError as exc:
            raise UsageError(f"{path}:{no}: bad value for {key}: {val.strip()!r}") from exc
    return out


def _settings(args) -> Settings:
    s = Settings()
    if getattr(args, "config", None):
        for k, v in load_config(args.config).items():
            setattr(s, k, v)
    if getattr(args, "tol", None) is not None:
        s.tol = args.tol
    if getattr(args, "max_terms", None) is not None:
        s.max_terms = args.max_terms
    if s.max_terms is not None and s.max_terms < 1:
        raise UsageError("max_terms must be a positive integer")
    return s


# ---------------------------------------------------------------- dispatch


def resolve_auto(mu: float, p: float) -> str:
    if p > 0 and mu in SCHLOMILCH_MU:
        return SCHLOMILCH_MU[mu]
    return "integral"


def applicable(method: str, mu: float, p: float, r: float) -> bool:
    if method == "series":
        return r < 1 and (mu > 0 if p == 0 else mu >= -0.5)
    if method == "integral":
        return mu > 0 if p == 0 else mu >= -0.5
    if p <= 0:
        return False
    if method == "thm1":
        return mu in THM1_MU
    return SINGLE_MU[method] == mu


def _check_method_domain(method: str, mu: float, p: float) -> None:
    if method in ("series", "integral"):
        return
    if not p > 0:
        raise DomainError(f"method {method} needs p > 0, got p={p!r}")
    if method == "thm1" and mu not in THM1_MU:
        raise DomainError(f"method thm1 needs mu in {{1/2, 3/2, 5/2}}, got mu={mu!r}")
    if method in SINGLE_MU and mu != SINGLE_MU[method]:
        raise DomainError(f"method {method} represents mu={SINGLE_MU[method]:g} only, got mu={mu!r}")


def evaluate(method: str, mu: float, p: float, r: float, settings: Settings, trace=None) -> EvalResult:
    """Run one named method; raises the library exceptions unchanged."""
    params = MathieuParams(mu, p, r)
    _check_method_domain(method, mu, p)
    tol = settings.tol
    if method == "series":
        params.require_mu()
        return s_series(
            params,
            tol,
            max_terms=settings.max_terms or SERIES_MAX_TERMS,
            threshold=settings.dispatch_p_threshold,
            trace=trace,
        )
    if method == "integral":
        return s_integral(params, tol)
    kw = {"max_terms": settings.max_terms or SCHLOMILCH_MAX_TERMS, "trace": trace}
    if method == "thm1":
        return repr_thm1_integer(int(round(mu + 1.5)), p, r, tol, **kw)
    fn = {"b1": repr_b1, "b2": repr_b2, "b3": repr_b3, "b4": repr_b4, "b7": repr_b7}[method]
    return fn(p, r, tol, **kw)


def _timed(method, mu, p, r, settings, trace=None, with_exc=False):
    """Return (record or None, exit code, message[, exception])."""
    t0 = time.perf_counter_ns()
    rec, err = None, None
    try:
        res = evaluate(method, mu, p, r, settings, trace)
        code, msg = EXIT_OK, None
    except DomainError as exc:
        res, code, msg, err = None, EXIT_DOMAIN, str(exc), exc
    except ConvergenceError as exc:
        res, code, msg, err = exc.best, EXIT_FAIL, str(exc), exc
    except InternalConsistencyError as exc:
        res, code, msg, err = None, EXIT_FAIL, str(exc), exc
    if res is not None:
        elapsed = time.perf_counter_ns() - t0
        rec = OutputRecord(method, mu, p, r, res.value, res.err_estimate, res.terms_or_nodes, elapsed)
    return (rec, code, msg, err) if with_exc else (rec, code, msg)


def _fail(code: int, msg: str) -> int:
    sys.stderr.write(f"pmathieu: {msg}\n")
    return code


# ---------------------------------------------------------------- commands


def run_compute(args) -> int:
    s = _settings(args)
    method = resolve_auto(args.mu, args.p) if args.method == "auto" else args.method
    rec, code, msg = _timed(method, args.mu, args.p, args.r, s)
    if rec is not None:
        if args.format == "csv":
            _emit(_csv_text(CSV_HEADER, [rec.csv_row()]))
        else:
            _emit(rec.to_json())
    if msg:
        _fail(code, msg)
    return code


def pairwise_delta(records: list[OutputRecord]) -> tuple[float, list[tuple[str, str]]]:
    """Largest relative pairwise gap and the pairs flagged as disagreeing.

    A pair disagrees when the absolute gap exceeds ten times the combined
    error estimates and the relative gap exceeds the enforced ``1e-8``.
    """
    worst = 0.0
    bad = []
    for i, a in enumerate(records):
        for b in records[i + 1 :]:
            d = abs(a.value - b.value)
            scale = max(abs(a.value), abs(b.value))
            rel = d / scale if scale > 0 else d
            worst = max(worst, rel)
            if d > 10 * (a.err_estimate + b.err_estimate) and rel > ENFORCED_REL:
                bad.append((a.method, b.method))
    return worst, bad


def run_compare(args) -> int:
    s = _settings(args)
    try:
        MathieuParams(args.mu, args.p, args.r)
    except DomainError as exc:
        return _fail(EXIT_DOMAIN, str(exc))
    methods = [m for m in METHODS if applicable(m, args.mu, args.p, args.r)]
    if not methods:
        return _fail(EXIT_DOMAIN, f"no method applies to mu={args.mu!r}, p={args.p!r}, r={args.r!r}")
    if args.inject_fault and args.inject_fault not in methods:
        raise UsageError(f"--inject-fault must name one of {methods}")
    records, code, msgs = [], EXIT_OK, []
    for m in methods:
        rec, c, msg = _timed(m, args.mu, args.p, args.r, s)
        if msg:
            msgs.append(f"{m}: {msg}")
            code = max(code, c)
        if rec is not None:
            if m == args.inject_fault:
                rec = OutputRecord(**{**asdict(rec), "value": rec.value * (1 + _FAULT_SHIFT)})
            records.append(rec)
    worst, bad = pairwise_delta(records)
    if bad:
        code = EXIT_FAIL
        msgs.append("disagreement between " + ", ".join(f"{a}/{b}" for a, b in bad))
    if args.format == "csv":
        rows = [r.csv_row() for r in records] + [["max_pairwise_delta", fmt_num(worst)]]
        _emit(_csv_text(CSV_HEADER, rows))
    else:
        body = ", ".join(r.to_json() for r in records)
        _emit(f'{{"records": [{body}], "max_pairwise_delta": {fmt_num(worst)}}}')
    for msg in msgs:
        sys.stderr.write(f"pmathieu: {msg}\n")
    return code


def report_rows(trace: list[tuple], max_terms: int) -> list[tuple]:
    """Trace rows at ``terms = 1, 2, 4, ...`` plus the final row."""
    rows = [row for row in trace if row[0] <= max_terms and (row[0] & (row[0] - 1)) == 0]
    if trace and (not rows or rows[-1][0] != trace[-1][0]):
        rows.append(trace[-1])
    return rows


def run_convergence(args) -> int:
    s = _settings(args)
    method = resolve_auto(args.mu, args.p) if args.method == "auto" else args.method
    if method == "integral":
        return _fail(EXIT_DOMAIN, "the integral representation has no term structure")
    trace: list[tuple] = []
    _, code, msg, err = _timed(method, args.mu, args.p, args.r, s, trace, with_exc=True)
    if code == EXIT_DOMAIN:
        return _fail(code, msg)
    rows = report_rows(trace, s.max_terms)
    if args.format == "json":
        body = ", ".join(
            f'{{"terms": {n}, "partial": {fmt_num(v)}, "err_estimate": {fmt_num(e)}}}' for n, v, e in rows
        )
        _emit(f'{{"method": {json.dumps(method)}, "rows": [{body}]}}')
    else:
        table = [[method, str(n), fmt_num(v), fmt_num(e)] for n, v, e in rows]
        _emit(_csv_text(["method", "terms", "partial", "err_estimate"], table))
    if code == EXIT_FAIL and isinstance(err, ConvergenceError) and not isinstance(err, DivergenceError):
        # hitting the requested cap is the point of the study, not a failure
        sys.stderr.write(f"pmathieu: note: {msg}\n")
        return EXIT_OK
    if msg:
        _fail(code, msg)
    return code


def run_zeta_p(args) -> int:
    s = _settings(args)
    t0 = time.perf_counter_ns()
    try:
        res = zeta_p(ZetaPParams(args.alpha, args.p), s.tol, threshold=s.dispatch_p_threshold)
        code, msg = EXIT_OK, None
    except DomainError as exc:
        return _fail(EXIT_DOMAIN, str(exc))
    except ConvergenceError as exc:
        res, code, msg = exc.best, EXIT_FAIL, str(exc)
    if res is not None:
        rec = {
            "method": res.method.value,
            "alpha": args.alpha,
            "p": args.p,
            "value": res.value,
            "err_estimate": res.err_estimate,
            "terms": res.terms_or_nodes,
            "elapsed_ns": time.perf_counter_ns() - t0,
        }
        if args.format == "csv":
            _emit(_csv_text(list(rec), [[rec["method"]] + [fmt_num(v) for v in list(rec.values())[1:]]]))
        else:
            parts = [f'"method": {json.dumps(rec["method"])}'] + [f'"{k}": {fmt_num(v)}' for k, v in list(rec.items())[1:]]
            _emit("{" + ", ".join(parts) + "}")
    if msg:
        _fail(code, msg)
    return code


def rl_oracle(f: Callable[[float], float], x: float, alpha: float, a: float) -> float:
    """Riemann--Liouville integral by QUADPACK's algebraic-weight rule."""
    val, _ = integrate.quad(f, a, x, weight="alg", wvar=(0.0, alpha - 1.0), limit=400, epsabs=0.0, epsrel=1e-13)
    return val / math.gamma(alpha)


def run_gl_check(args) -> int:
    """Fractional integral of ``exp(-decay t)`` by GL against the RL oracle;
    for integer ``alpha`` also the finite-difference eigen relation."""
    q = args.decay
    if not (args.alpha > 0 and q > 0):
        return _fail(EXIT_DOMAIN, "gl-check needs alpha > 0 and decay > 0")
    a = args.a if args.a is not None else laplace_base_point(args.x, q)
    if not a < args.x:
        return _fail(EXIT_DOMAIN, f"base point a={a!r} must lie left of x={args.x!r}")
    f = lambda t: np.exp(-q * np.asarray(t))  # noqa: E731
    try:
        gl = gl_fractional(f, args.x, args.alpha, GLConfig(a))
        code = EXIT_OK
    except ConvergenceError as exc:
        gl, code = exc.best, EXIT_FAIL
    oracle = rl_oracle(lambda t: math.exp(-q * t), args.x, args.alpha, a)
    rel = abs(gl.value - oracle) / abs(oracle)
    out = {"check": "gl-vs-rl", "alpha": args.alpha, "x": args.x, "a": a, "value": gl.value, "oracle": oracle, "rel_delta": rel}
    lines = [out]
    if rel > 1e-4:
        code = EXIT_FAIL
    n = args.alpha
    if n == round(n) and 1 <= n <= 4:
        d = nth_derivative(lambda s_: np.exp(-np.asarray(s_) * args.x), q, int(n))
        exact = (-args.x) ** int(n) * math.exp(-q * args.x)
        erel = abs(d.value - exact) / abs(exact)
        lines.append({"check": "eigen", "alpha": n, "x": args.x, "q": q, "value": d.value, "oracle": exact, "rel_delta": erel})
        if erel > 1e-7:
            code = EXIT_FAIL
    for rec in lines:
        parts = [f'"check": {json.dumps(rec.pop("check"))}'] + [f'"{k}": {fmt_num(v)}' for k, v in rec.items()]
        _emit("{" + ", ".join(parts) + "}")
    return code


def run_selfcheck(args) -> int:
    results = run_invariants(args.inject_fault)
    for c in results:
        tag = "PASS" if c.passed else "FAIL"
        _emit(f"{tag} {c.name:22s} measured={c.measured:.3e} tolerated={c.tolerated:.1e}")
    failed = [c.name for c in results if not c.passed]
    _emit(f"{len(results) - len(failed)}/{len(results)} invariant groups passed")
    return EXIT_FAIL if failed else EXIT_OK


# ---------------------------------------------------------------- parser


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pmathieu", description="Evaluate the p-extended Mathieu series S_{mu,p}(r).")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def params(sp, method_choices, method_default=None, fmt=("json", "csv"), fmt_default="json"):
        sp.add_argument("--mu", type=float, required=True)
        sp.add_argument("--p", type=float, required=True)
        sp.add_argument("--r", type=float, required=True)
        if method_choices:
            sp.add_argument("--method", choices=method_choices, default=method_default, required=method_default is None)
        sp.add_argument("--tol", type=float, default=None, help="requested relative accuracy (default 1e-10)")
        sp.add_argument("--format", choices=fmt, default=fmt_default)
        sp.add_argument("--config", default=None, help="key=value file: tol, max_terms, dispatch_p_threshold")

    sp = sub.add_parser("compute", help="evaluate with one method")
    params(sp, METHODS + ("auto",), "auto")
    sp.set_defaults(func=run_compute)

    sp = sub.add_parser("compare", help="evaluate with every applicable method")
    params(sp, None)
    sp.add_argument("--inject-fault", default=None, help=argparse.SUPPRESS)
    sp.set_defaults(func=run_compare)

    sp = sub.add_parser("convergence", help="partial sums at 1, 2, 4, ... terms")
    params(sp, tuple(m for m in METHODS) + ("auto",), None, ("csv", "json"), "csv")
    sp.add_argument("--max-terms", type=_positive_int, required=True)
    sp.set_defaults(func=run_convergence)

    sp = sub.add_parser("zeta-p", help="p-extended Riemann zeta function")
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--tol", type=float, default=1e-12)
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.add_argument("--config", default=None)
    sp.set_defaults(func=run_zeta_p)

    sp = sub.add_parser("gl-check", help="Grünwald-Letnikov integral of exp(-decay t) against quadrature")
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--x", type=float, required=True)
    sp.add_argument("--a", type=float, default=None, help="base point (default x - 40/decay)")
    sp.add_argument("--decay", type=float, default=1.5)
    sp.set_defaults(func=run_gl_check)

    sp = sub.add_parser("selfcheck", help="fast invariant suite")
    sp.add_argument("--inject-fault", choices=FAULTS, default=None, help=argparse.SUPPRESS)
    sp.set_defaults(func=run_selfcheck)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        return _fail(EXIT_USAGE, str(exc))
    except DomainError as exc:
        return _fail(EXIT_DOMAIN, str(exc))


if __name__ == "__main__":
    sys.exit(main())
