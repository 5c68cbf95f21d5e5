import math

import mpmath as mp
import pytest

from pmathieu import ConvergenceError, DomainError, InternalConsistencyError, MethodKind
from pmathieu.mathieu_core import MathieuParams, s_integral, s_series
from pmathieu.quadrature import IntegrandSpec, Oscillator, Weight, integrate_semi_infinite
from pmathieu.schlomilch import (
    TrigKind,
    _twins,
    b3_term,
    b4_term,
    cosine_k3_sum,
    kernel_A,
    kernel_B,
    kernel_E,
    kernel_E_complex,
    repr_b1,
    repr_b2,
    repr_b3,
    repr_b4,
    repr_b7,
    repr_thm1_fractional,
    repr_thm1_integer,
    z_pair,
)
from pmathieu.zeta_p import ZetaPParams, zeta_p

from oracle_values import MATHIEU


def rel(a, b):
    return abs(a - b) / abs(b)


def ref(mu, p, r):
    return s_integral(MathieuParams(mu, p, r), 1e-11).value


def quad(sigma, p, q, osc, gamma, nu=0.0):
    spec = IntegrandSpec(sigma=sigma, p=p, weight=Weight.EXP, q=q, oscillator=osc, nu=nu, gamma=gamma)
    return integrate_semi_infinite(spec, 1e-12).value


class TestZPair:
    def test_product_identity(self):
        for p, q, g in [(1, 2, 1), (0.25, 100, 3), (4, 1e-3, 0.3), (1, 1e6, 1e-4)]:
            zm, zp = z_pair(p, q, g)
            assert (zm * zp) ** 2 == pytest.approx(4 * p * p * g * g, rel=1e-13)

    def test_against_mpmath(self):
        zm, zp = z_pair(1.5, 1e4, 0.2)
        with mp.workdps(40):
            s = mp.sqrt(mp.mpf(1e4) ** 2 + mp.mpf(0.2) ** 2)
            ref_m, ref_p = float(mp.sqrt(3) * mp.sqrt(s - 1e4)), float(mp.sqrt(3) * mp.sqrt(s + 1e4))
        assert rel(zm, ref_m) < 1e-13
        assert rel(zp, ref_p) < 1e-13


class TestKernels:
    def test_kernel_A_quadrature(self):
        assert rel(kernel_A(1, 2, 1, 0), quad(-1.0, 1.0, 2.0, Oscillator.BESSEL_J, 1.0, 0.0)) < 1e-9

    def test_kernel_A_small_gamma(self):
        assert abs(kernel_A(1, 2, 1e-10, 1)) < 1e-9

    def test_kernel_A_parity(self):
        zm, zp = z_pair(1, 2, 1)
        assert kernel_A(1, 2, 1, -1) == pytest.approx(-kernel_A(1, 2, 1, 1), rel=1e-14)
        assert kernel_A(1, 2, 1, 1) == pytest.approx(2 * float(mp.besselj(1, zm) * mp.besselk(1, zp)), rel=1e-13)

    def test_kernel_B_quadrature(self):
        assert rel(kernel_B(1, 1, 0.5), quad(-2.0, 1.0, 1.0, Oscillator.BESSEL_J, 0.5, 0.0)) < 1e-9

    def test_kernel_B_positive(self):
        v = kernel_B(2, 3, 1)
        assert v > 0 and math.isfinite(v)
        assert rel(v, quad(-2.0, 2.0, 3.0, Oscillator.BESSEL_J, 1.0, 0.0)) < 1e-9

    def test_kernel_E_cos(self):
        assert rel(kernel_E(1, 1, 0.5, 0, TrigKind.COS), quad(0.0, 1.0, 1.0, Oscillator.COS, 0.5)) < 1e-9

    def test_kernel_E_sin(self):
        assert rel(kernel_E(1, 1, 0.5, 1, TrigKind.SIN), quad(1.0, 1.0, 1.0, Oscillator.SIN, 0.5)) < 1e-9

    def test_kernel_E_sin_small_gamma(self):
        assert abs(kernel_E(1, 1, 1e-9, 0, TrigKind.SIN)) < 1e-8

    def test_kernel_E_negative_order(self):
        # nu = -1 gives K_0 with no power of (q + i gamma)
        assert rel(kernel_E(1, 2, 0.7, -1, TrigKind.COS), quad(-1.0, 1.0, 2.0, Oscillator.COS, 0.7)) < 1e-9

    def test_kernel_E_residue_is_small(self):
        z = kernel_E_complex(1, 1, 0.5, 2, TrigKind.SIN)
        assert abs(z.imag) <= 1e-14 * abs(z.real)

    @pytest.mark.parametrize("nu", [0.5, 8, -2])
    def test_kernel_E_order_domain(self, nu):
        with pytest.raises(DomainError):
            kernel_E(1, 1, 0.5, nu, TrigKind.COS)

    def test_kernel_domain(self):
        with pytest.raises(DomainError):
            kernel_A(0, 1, 1, 0)
        with pytest.raises(DomainError):
            kernel_B(1, -1, 1)


class TestDerivativeForms:
    def test_thm1_two(self):
        assert rel(repr_thm1_integer(2, 1, 0.5).value, ref(0.5, 1, 0.5)) < 1e-6
        assert rel(repr_thm1_integer(2, 1, 0.5).value, MATHIEU[(0.5, 1.0, 0.5)]) < 1e-6

    def test_thm1_three(self):
        assert rel(repr_thm1_integer(3, 1, 0.5).value, MATHIEU[(1.5, 1.0, 0.5)]) < 1e-6

    def test_thm1_four(self):
        assert rel(repr_thm1_integer(4, 1, 0.5).value, ref(2.5, 1, 0.5)) < 1e-5

    def test_thm1_order_domain(self):
        with pytest.raises(DomainError):
            repr_thm1_integer(5, 1, 0.5)

    def test_b1(self):
        assert rel(repr_b1(1, 0.5).value, ref(0.5, 1, 0.5)) < 1e-5

    def test_b1_against_series(self):
        assert rel(repr_b1(2, 0.3).value, s_series(MathieuParams(0.5, 2, 0.3), 1e-12).value) < 1e-5

    def test_b1_matches_thm1(self):
        assert rel(repr_b1(1, 0.7).value, repr_thm1_integer(2, 1, 0.7).value) < 1e-5

    def test_b2(self):
        assert rel(repr_b2(1, 0.5).value, MATHIEU[(-0.5, 1.0, 0.5)]) < 1e-7

    def test_b2_against_series(self):
        assert rel(repr_b2(1, 0.5).value, s_series(MathieuParams(-0.5, 1, 0.5), 1e-12).value) < 1e-7

    def test_b2_analytic_derivative(self):
        a = repr_b2(1, 0.5, 1e-12, derivative="analytic").value
        b = repr_b2(1, 0.5, 1e-12).value
        assert rel(a, b) < 1e-8

    def test_b2_bad_mode(self):
        with pytest.raises(DomainError):
            repr_b2(1, 0.5, derivative="symbolic")

    def test_tags(self):
        assert repr_b1(1, 0.5).method is MethodKind.B1
        assert repr_b2(1, 0.5).method is MethodKind.B2
        assert repr_thm1_integer(2, 1, 0.5).method is MethodKind.THM1_INT

    def test_budget(self):
        with pytest.raises(ConvergenceError) as info:
            repr_b2(0.25, 0.5, 1e-12, max_terms=4)
        assert info.value.best is not None


class TestConjugatePairs:
    def test_b3(self):
        assert rel(repr_b3(1, 0.5).value, MATHIEU[(0.0, 1.0, 0.5)]) < 1e-8

    def test_b3_large_gamma(self):
        assert rel(repr_b3(0.25, 1.5).value, MATHIEU[(0.0, 0.25, 1.5)]) < 1e-8

    def test_b3_small_gamma_limit(self):
        assert rel(repr_b3(1, 1e-9).value, 2 * zeta_p(ZetaPParams(1.0, 1.0)).value) < 1e-8

    def test_b4(self):
        assert rel(repr_b4(1, 0.5).value, MATHIEU[(1.0, 1.0, 0.5)]) < 1e-8
        assert rel(repr_b4(1, 1.5).value, MATHIEU[(1.0, 1.0, 1.5)]) < 1e-8

    def test_b4_against_series(self):
        assert rel(repr_b4(0.5, 0.9).value, s_series(MathieuParams(1, 0.5, 0.9), 1e-12).value) < 1e-8

    def test_b4_small_gamma_limit(self):
        assert rel(repr_b4(1, 1e-6).value, 2 * zeta_p(ZetaPParams(3.0, 1.0)).value) < 1e-8

    def test_b4_square_root_reading_fails(self):
        # the square-root denominator visible in one display does not reproduce S_{1,p}
        p, g = 1.0, 0.5
        alt = 0.0
        for k in range(1, 400):
            plus = complex(mp.besselk(2, 2 * mp.sqrt(p * mp.mpc(k, g)))) / complex(k, g) ** 0.5
            alt += ((1j * p / g) * (plus - plus.conjugate())).real
        assert rel(alt, MATHIEU[(1.0, 1.0, 0.5)]) > 1e-3

    def test_b7(self):
        assert rel(repr_b7(1, 0.7).value, MATHIEU[(2.0, 1.0, 0.7)]) < 1e-8

    def test_b7_large_r(self):
        v = repr_b7(4, 3.0).value
        assert abs(v - MATHIEU[(2.0, 4.0, 3.0)]) < 1e-8 * 1e-2

    def test_b7_against_series(self):
        assert rel(repr_b7(1, 0.5).value, s_series(MathieuParams(2, 1, 0.5), 1e-12).value) < 1e-8

    def test_b7_composition(self):
        p, r = 1.0, 0.7
        composed = ref(1, p, r) / (2 * r) ** 2 - cosine_k3_sum(p, r, 1e-12).value
        assert rel(composed, repr_b7(p, r).value) < 1e-9

    def test_residue_reported(self):
        res = repr_b3(1, 0.5)
        assert 0 <= res.imag_residue <= 1e-10

    def test_term_envelope_decays(self):
        # the real terms change sign as the phase of 2 sqrt(p(k + i gamma)) turns,
        # so decay is asserted on the modulus of the complex twin
        for p in (0.25, 1.0, 4.0):
            for g in (0.3, 0.7, 1.5, 3.0):
                for order, power in ((1, 0.5), (2, 1.0), (3, 1.5)):
                    mags = [abs(_twins(order, p, float(k), g, power)[0]) for k in range(2, 80)]
                    assert all(b < a for a, b in zip(mags, mags[1:]))

    def test_real_terms_oscillate(self):
        signs = {b3_term(1.0, 3.0, k).real > 0 for k in range(1, 30)}
        assert signs == {True, False}

    def test_tags(self):
        assert repr_b3(1, 0.5).method is MethodKind.B3
        assert repr_b4(1, 0.5).method is MethodKind.B4
        assert repr_b7(1, 0.5).method is MethodKind.B7

    def test_trace(self):
        trace = []
        res = repr_b3(1, 0.5, trace=trace)
        assert [row[0] for row in trace] == list(range(1, res.terms_or_nodes + 1))
        assert trace[-1][1] == res.value

    def test_domain(self):
        for fn in (repr_b3, repr_b4, repr_b7):
            with pytest.raises(DomainError):
                fn(0.0, 0.5)
            with pytest.raises(DomainError):
                fn(1.0, -0.5)

    def test_residue_guard(self, monkeypatch):
        import pmathieu.schlomilch as sch

        real_twins = sch._twins

        def skewed(order, p, q, gamma, power):
            a, b = real_twins(order, p, q, gamma, power)
            return a, b * (1 + 1e-6j)

        monkeypatch.setattr(sch, "_twins", skewed)
        with pytest.raises(InternalConsistencyError):
            repr_b3(1, 0.5)


class TestFractional:
    def test_requires_opt_in(self):
        with pytest.raises(DomainError):
            repr_thm1_fractional(2.5, 1.0, 0.5)

    def test_half_integer_order(self):
        # modest accuracy is all this branch promises
        v = repr_thm1_fractional(2.5, 1.0, 0.5, experimental=True).value
        assert rel(v, MATHIEU[(1.0, 1.0, 0.5)]) < 1e-2

    def test_domain(self):
        with pytest.raises(DomainError):
            repr_thm1_fractional(0.4, 1.0, 0.5, experimental=True)
        with pytest.raises(DomainError):
            repr_thm1_fractional(4.5, 1.0, 0.5, experimental=True)
