import math

import mpmath as mp
import numpy as np
import pytest

from pmathieu import DomainError
from pmathieu.special_kernels import (
    bessel_j,
    bessel_j_array,
    bessel_k_complex,
    bessel_k_real,
    gamma_fn,
    gen_binomial,
    log_bessel_k_real,
    riemann_zeta,
)

from oracle_values import BESSEL_J, BESSEL_K, BESSEL_K_COMPLEX, GAMMA


def rel(a, b):
    return abs(a - b) / abs(b)


class TestBesselJ:
    def test_half_order_closed_form(self):
        assert bessel_j(0.5, math.pi / 2) == pytest.approx(2 / math.pi, rel=1e-14)

    def test_order_zero_at_origin(self):
        assert bessel_j(0, 1e-300) == 1.0

    @pytest.mark.parametrize("key", sorted(BESSEL_J))
    def test_against_mpmath(self, key):
        assert rel(bessel_j(*key), BESSEL_J[key]) < 1e-12

    def test_ascending_series_oracle(self):
        nu, x = 1.5, 2.0
        mp.mp.dps = 40
        s = mp.nsum(lambda m: (-1) ** m * (mp.mpf(x) / 2) ** (2 * m + nu) / (mp.factorial(m) * mp.gamma(m + nu + 1)), [0, mp.inf])
        mp.mp.dps = 15
        assert rel(bessel_j(nu, x), float(s)) < 1e-13

    @pytest.mark.parametrize("args", [(51, 1.0), (0, 0.0), (0, -1.0)])
    def test_domain(self, args):
        with pytest.raises(DomainError):
            bessel_j(*args)

    def test_array_matches_scalar(self):
        x = np.linspace(0.1, 30, 17)
        np.testing.assert_array_equal(bessel_j_array(1.3, x), [bessel_j(1.3, t) for t in x])


class TestBesselKReal:
    def test_half_order_closed_form(self):
        assert bessel_k_real(0.5, 1.0) == pytest.approx(math.sqrt(math.pi / 2) / math.e, rel=1e-14)

    def test_subnormal_order(self):
        assert bessel_k_real(2.2e-311, 1.0) == bessel_k_real(0.0, 1.0)
        assert log_bessel_k_real(2.2e-311, 1.0) == log_bessel_k_real(0.0, 1.0)

    def test_parity_exact(self):
        assert bessel_k_real(-1, 3.0) == bessel_k_real(1, 3.0)

    @pytest.mark.parametrize("key", sorted(BESSEL_K))
    def test_against_integral_oracle(self, key):
        assert rel(bessel_k_real(*key), BESSEL_K[key]) < 1e-12

    def test_underflow_is_not_an_error(self):
        assert bessel_k_real(0, 800.0) == 0.0

    def test_domain(self):
        with pytest.raises(DomainError):
            bessel_k_real(1, 0.0)

    @pytest.mark.parametrize("nu, x", [(3.0, 2.0), (40.0, 5.0), (600.0, 30.0), (0.5, 700.0)])
    def test_log_k_matches_mpmath(self, nu, x):
        ref = float(mp.log(mp.besselk(nu, x)))
        assert abs(log_bessel_k_real(nu, x) - ref) < 1e-12 * max(1.0, abs(ref))


class TestBesselKComplex:
    def test_real_axis(self):
        assert bessel_k_complex(1, 1 + 0j) == pytest.approx(bessel_k_real(1, 1.0), rel=1e-15)
        assert bessel_k_complex(1, 1 + 0j).imag == 0.0

    def test_schwarz_reflection(self):
        z = 2 + 3j
        a, b = bessel_k_complex(0, z.conjugate()), bessel_k_complex(0, z).conjugate()
        assert abs(a.real - b.real) <= 1e-12 and abs(a.imag - b.imag) <= 1e-12

    @pytest.mark.parametrize("key", sorted(BESSEL_K_COMPLEX, key=str))
    def test_against_mpmath(self, key):
        n, z = key
        assert abs(bessel_k_complex(n, z) - BESSEL_K_COMPLEX[key]) / abs(BESSEL_K_COMPLEX[key]) < 1e-11

    def test_path_integral_oracle(self):
        # K_2(1+i) from its cosh-integral, truncated where the integrand drops below 1e-20
        z = mp.mpc(1, 1)
        val = mp.quad(lambda t: mp.exp(-z * mp.cosh(t)) * mp.cosh(2 * t), [0, 1, 2, 3, 4.5])
        assert abs(bessel_k_complex(2, 1 + 1j) - complex(val)) / abs(complex(val)) < 1e-11

    @pytest.mark.parametrize("args", [(1, -0.1 + 1j), (1, 0j), (9, 1 + 0j), (1.5, 1 + 0j)])
    def test_domain(self, args):
        with pytest.raises(DomainError):
            bessel_k_complex(*args)

    def test_relative_accuracy_over_region(self):
        worst = 0.0
        for n in (0, 1, 2, 3, 5, 8):
            for mod in (0.05, 0.5, 2.0, 10.0, 60.0):
                for ang in (-1.5, -0.7, 0.0, 0.4, 1.5):
                    z = mod * complex(math.cos(ang), math.sin(ang))
                    ref = complex(mp.besselk(n, mp.mpc(z.real, z.imag)))
                    worst = max(worst, abs(bessel_k_complex(n, z) - ref) / abs(ref))
        assert worst < 1e-11


class TestScalars:
    def test_gamma_closed_forms(self):
        assert gamma_fn(5) == 24.0
        assert gamma_fn(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-15)

    @pytest.mark.parametrize("x", sorted(GAMMA))
    def test_gamma_against_mpmath(self, x):
        assert rel(gamma_fn(x), GAMMA[x]) < 1e-13

    @pytest.mark.parametrize("x", [0, -1, -7])
    def test_gamma_poles(self, x):
        with pytest.raises(DomainError):
            gamma_fn(x)

    def test_gen_binomial(self):
        assert gen_binomial(2.5, 0) == 1.0
        assert gen_binomial(3, 2) == pytest.approx(10.0, rel=1e-15)
        assert gen_binomial(0.5, 3) == pytest.approx(1.5 * 2.5 / 2 * 3.5 / 3, rel=1e-15)
        assert gen_binomial(-0.5, 4) == pytest.approx(float(mp.binomial(3.5, 4)), rel=1e-14)

    def test_zeta_closed_forms(self):
        assert riemann_zeta(2) == pytest.approx(math.pi**2 / 6, rel=1e-15)
        assert riemann_zeta(4) == pytest.approx(math.pi**4 / 90, rel=1e-15)

    def test_zeta_three_by_summation(self):
        # Euler-Maclaurin after 1000 terms
        N = 1000
        head = math.fsum(n**-3.0 for n in range(1, N))
        tail = 1 / (2 * N**2) + 1 / (2 * N**3) + 3 / (12 * N**4)
        assert rel(riemann_zeta(3), head + tail) < 1e-14

    def test_zeta_domain(self):
        with pytest.raises(DomainError):
            riemann_zeta(1.0)
