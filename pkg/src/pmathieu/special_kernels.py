r"""Scalar special-function kernels.

Bessel functions :math:`J_\nu`, :math:`K_\nu` (real order, real argument),
:math:`K_n(z)` for small integer order at complex argument, Gamma,
generalized binomial coefficients and the Riemann zeta function.

The heavy lifting is delegated to :mod:`scipy.special` (Cephes/AMOS); this
module pins the domains, turns silent ``nan``/``inf`` into exceptions and adds
an overflow-free :func:`log_bessel_k_real` for large orders.
"""

from __future__ import annotations

import math
import sys

import numpy as np
from scipy import special as sp

from ._types import DomainError

MAX_REAL_ORDER = 50.0
MAX_COMPLEX_ORDER = 8


def _finite(value, what):
    if isinstance(value, complex):
        ok = math.isfinite(value.real) and math.isfinite(value.imag)
    else:
        ok = math.isfinite(value)
    if not ok:
        raise OverflowError(f"{what} is not finite ({value!r})")
    return value


def bessel_j(nu: float, x: float) -> float:
    """Bessel function of the first kind :math:`J_\\nu(x)` for ``x > 0``."""
    if not abs(nu) <= MAX_REAL_ORDER:
        raise DomainError(f"|nu| must be <= {MAX_REAL_ORDER}, got {nu!r}")
    if not x > 0 or not math.isfinite(x):
        raise DomainError(f"bessel_j needs x > 0, got {x!r}")
    return _finite(float(sp.jv(nu, x)), f"J_{nu}({x})")


def bessel_k_real(nu: float, x: float) -> float:
    """Modified Bessel function :math:`K_\\nu(x)` for ``x > 0``.

    ``K_{-nu} = K_nu`` holds exactly because the order is folded to ``|nu|``
    before evaluation. Underflow to zero for large ``x`` is not an error.
    """
    if not abs(nu) <= MAX_REAL_ORDER:
        raise DomainError(f"|nu| must be <= {MAX_REAL_ORDER}, got {nu!r}")
    if not x > 0 or not math.isfinite(x):
        raise DomainError(f"bessel_k_real needs x > 0, got {x!r}")
    order = abs(nu)
    if order < sys.float_info.min:
        # scipy's kv returns nan for subnormal orders; K is flat in nu there
        order = 0.0
    return _finite(float(sp.kv(order, x)), f"K_{nu}({x})")


def log_bessel_k_real(nu: float, x: float) -> float:
    r"""Natural logarithm of :math:`K_\nu(x)`, usable for very large orders.

    For orders where :func:`scipy.special.kve` overflows, the value is
    carried up from the fractional part of ``nu`` by the forward recurrence
    :math:`K_{\mu+1} = K_{\mu-1} + (2\mu/x) K_\mu`, which is stable for
    :math:`K`, with periodic rescaling.
    """
    if not x > 0:
        raise DomainError(f"log_bessel_k_real needs x > 0, got {x!r}")
    nu = abs(nu)
    if nu < sys.float_info.min:
        nu = 0.0
    direct = float(sp.kve(nu, x))
    if math.isfinite(direct) and direct > 0:
        return math.log(direct) - x
    mu = nu - math.floor(nu)
    k_prev = float(sp.kve(mu, x))
    k_curr = float(sp.kve(mu + 1.0, x))
    log_scale = 0.0
    steps = int(round(nu - mu)) - 1
    for i in range(steps):
        order = mu + 1.0 + i
        k_prev, k_curr = k_curr, k_prev + (2.0 * order / x) * k_curr
        if k_curr > 1e250:
            k_prev /= k_curr
            log_scale += math.log(k_curr)
            k_curr = 1.0
    if steps < 0:
        k_curr = k_prev
    return math.log(k_curr) + log_scale - x


def bessel_k_complex(n: int, z: complex) -> complex:
    """:math:`K_n(z)` for integer ``0 <= n <= 8`` on the right half-plane."""
    if int(n) != n or not 0 <= n <= MAX_COMPLEX_ORDER:
        raise DomainError(f"complex-argument K needs integer order in [0, 8], got {n!r}")
    z = complex(z)
    if not z.real > 0:
        raise DomainError(f"bessel_k_complex needs Re(z) > 0, got {z!r}")
    return _finite(complex(sp.kv(int(n), z)), f"K_{n}({z})")


def gamma_fn(x: float) -> float:
    if x <= 0 and x == math.floor(x):
        raise DomainError(f"Gamma has a pole at {x!r}")
    return _finite(float(sp.gamma(x)), f"Gamma({x})")


def gen_binomial(mu: float, n: int) -> float:
    r"""Generalized binomial coefficient :math:`\binom{\mu+n}{n}`.

    Computed as the product :math:`\prod_{j=1}^{n} (\mu+j)/j`.
    """
    if n < 0 or int(n) != n:
        raise DomainError(f"n must be a non-negative integer, got {n!r}")
    out = 1.0
    for j in range(1, int(n) + 1):
        out *= (mu + j) / j
    return _finite(out, f"binom({mu}+{n}, {n})")


def riemann_zeta(s: float) -> float:
    if not s > 1:
        raise DomainError(f"riemann_zeta needs s > 1, got {s!r}")
    return float(sp.zeta(s, 1.0))


def bessel_j_array(nu: float, x: np.ndarray) -> np.ndarray:
    """Vectorized :math:`J_\\nu` for integrand evaluation (no domain checks)."""
    return sp.jv(nu, x)
