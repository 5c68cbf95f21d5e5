"""p-extended Mathieu series and its Bessel, zeta and Schlömilch representations."""

from ._types import (
    ConvergenceError,
    DivergenceError,
    DomainError,
    EvalResult,
    InternalConsistencyError,
    MethodKind,
)
from .gl_derivative import GLConfig, gl_fractional, nth_derivative
from .mathieu_core import MathieuParams, s_classical, s_integral, s_series
from .quadrature import IntegrandSpec, Oscillator, Weight, integrate_semi_infinite, laplace_term_sum
from .schlomilch import (
    TrigKind,
    kernel_A,
    kernel_B,
    kernel_E,
    repr_b1,
    repr_b2,
    repr_b3,
    repr_b4,
    repr_b7,
    repr_thm1_fractional,
    repr_thm1_integer,
    z_pair,
)
from .special_kernels import bessel_j, bessel_k_complex, bessel_k_real, gamma_fn, gen_binomial, riemann_zeta
from .zeta_p import ZetaPParams, zeta_p, zeta_p_integral, zeta_p_kseries

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
