import cmath
import math

import numpy as np
import pytest

from stokeszeros.errors import CertificateError, DomainError
from stokeszeros.polynomials import ComplexPolynomial, beta
from stokeszeros.quaddiff import build_quad_diff
from stokeszeros.stokescomplex import stokes_complex
from stokeszeros.wkb import (
    PhaseIntegral,
    WKBParameters,
    arc_mass,
    eigenvalue_estimate,
    growth_bound,
    growth_constant,
    h0_bound,
    index_estimate,
    limit_density,
    liouville_g,
    wkb_approximant,
)

U2_CLOSED_FORM = -(math.sqrt(3.0) - 0.5 * math.log(2.0 + math.sqrt(3.0)))


@pytest.fixture(scope="module")
def sc21():
    return stokes_complex(2, 1)


@pytest.fixture(scope="module")
def phase21(sc21):
    return PhaseIntegral(sc21)


@pytest.fixture(scope="module")
def sc42():
    return stokes_complex(4, 2)


def test_growth_constant_harmonic():
    # sqrt(pi) Gamma(2) / Gamma(3/2) = 2
    assert abs(growth_constant(2, 1) - 2.0) < 1e-12


def test_growth_constant_quartic():
    assert abs(growth_constant(4, 2) - 1.7972103) < 1e-6


def test_growth_constant_symmetry():
    for d, ell in [(4, 1), (6, 1), (6, 2), (5, 2)]:
        assert abs(growth_constant(d, ell) - growth_constant(d, d - ell)) < 1e-12


def test_eigenvalue_estimate_harmonic_linear():
    # exponent 2d/(d+2) = 1 for d = 2
    for n in (3, 10, 25):
        assert abs(eigenvalue_estimate(2, 1, n) - 2 * n) < 1e-10


def test_eigenvalue_estimate_quartic_value():
    assert abs(eigenvalue_estimate(4, 2, 10) - 47.08) < 0.01


def test_index_estimate_inverse():
    for d, ell, n in [(4, 2, 7), (3, 1, 12), (6, 1, 4)]:
        lam = eigenvalue_estimate(d, ell, n)
        assert abs(index_estimate(d, ell, lam) - n) < 1e-10


def test_u_basepoint_and_segment(phase21):
    assert phase21.u(0.0) == 0.0
    for x in (-0.9, -0.3, 0.4, 0.99):
        assert abs(phase21.u(x)) < 1e-9


def test_u_closed_form_at_two(phase21):
    assert abs(phase21.u(2.0) - U2_CLOSED_FORM) < 1e-9
    assert abs(phase21.u(-2.0) - U2_CLOSED_FORM) < 1e-9


def test_u_mirror_symmetry(phase21):
    for z in (1.4 + 0.7j, 0.2 + 1.9j, 2.5 - 0.4j):
        assert abs(phase21.u(z) - phase21.u(-z.conjugate())) < 1e-8


def test_u_decays_on_boundary_rays(phase21):
    # u decreases toward -infinity along both boundary anti-Stokes rays
    assert phase21.u(1.5) < 0 > phase21.u(-1.5)
    assert phase21.u(3.0) < phase21.u(2.0) < phase21.u(1.2) < 0


def test_u_imaginary_axis_oracle(phase21):
    # closed form int_0^y sqrt(1+s^2) ds
    y = 2.0
    expected = 0.5 * (y * math.sqrt(1 + y * y) + math.asinh(y))
    assert abs(phase21.u(2j) - expected) < 1e-9


def test_period_pure_imaginary(phase21, sc42):
    p = phase21.e0_period()
    assert abs(p.real) <= 1e-9
    assert abs(abs(p.imag) - math.pi) < 1e-6  # loop of sqrt(z^2-1) around [-1,1]
    p42 = PhaseIntegral(sc42).e0_period()
    assert abs(p42.real) <= 1e-9


def test_u_continuous_across_exceptional_ray(sc42):
    pi42 = PhaseIntegral(sc42)
    for y in (1.3, 1.8, 2.6):
        left = pi42.u(-1e-9 + y * 1j)
        right = pi42.u(1e-9 + y * 1j)
        assert abs(left - right) <= 1e-7


def test_u_constant_along_crease(sc42):
    pi42 = PhaseIntegral(sc42)
    base = pi42.u(1j)
    s = np.linspace(0, 1, 20001)
    oracle = np.trapezoid(np.sqrt(1 - s**4), s)
    assert abs(base - oracle) < 1e-6
    for y in (1.4, 2.2, 3.5):
        assert abs(pi42.u(1e-9 + y * 1j) - base) < 1e-7


def test_u_subharmonic_mean_inequality(phase21):
    rng = np.random.default_rng(5)
    for _ in range(4):
        zc = complex(rng.uniform(-1.3, 1.3), rng.uniform(-0.5, 0.5))
        r = 0.15
        avg = np.mean(
            [phase21.u(zc + r * cmath.exp(2j * math.pi * k / 48)) for k in range(48)]
        )
        assert phase21.u(zc) <= avg + 1e-7


def test_limit_density_semicircle_peak(sc21):
    assert abs(limit_density(sc21, 0.0) - 2.0 / math.pi) < 1e-12


def test_limit_density_vanishes_at_turning_points(sc21, sc42):
    assert limit_density(sc21, 1.0) == 0.0
    assert abs(limit_density(sc42, 1j)) < 1e-6


def test_limit_density_off_support_rejected(sc21):
    with pytest.raises(DomainError):
        limit_density(sc21, 0.5 + 0.5j)


def test_e0_unit_mass_self_adjoint(sc21, sc42):
    # total limit mass of the short line is one zero per unit index
    for sc in (sc21, sc42):
        e0 = sc.lines[sc.e0_index].samples
        assert abs(arc_mass(sc.quaddiff, e0) - 1.0) < 2e-3


def test_e0_mass_beta_identity():
    # int_-1^1 sqrt(1-x^4) dx = (2/4) B(3/2, 1/4), semicircle analogue
    x = np.linspace(-1, 1, 200001)
    direct = np.trapezoid(np.sqrt(np.clip(1 - x**4, 0, None)), x)
    assert abs(direct - 0.5 * beta(1.5, 0.25)) < 1e-6


def test_liouville_g_constant_is_zero():
    assert liouville_g(ComplexPolynomial([4.0]), 1.3) == 0


def test_liouville_g_value_and_finite_difference_oracle():
    q = build_quad_diff(2, 1)
    got = liouville_g(q, 2.0)
    assert abs(got - (-7.0 / 54.0)) < 1e-12
    # finite-difference oracle for Q' and Q''
    h = 1e-5
    f = q.polynomial
    d1 = (f(2 + h) - f(2 - h)) / (2 * h)
    d2 = (f(2 + h) - 2 * f(2.0) + f(2 - h)) / (h * h)
    oracle = -(5.0 / 16.0) * d1 * d1 / f(2.0) ** 3 + d2 / (4 * f(2.0) ** 2)
    assert abs(got - oracle) < 1e-6


def test_liouville_g_pt_symmetry():
    q = build_quad_diff(3, 1)
    for z in (1.7 + 0.4j, 2.5 - 1.0j):
        assert abs(liouville_g(q, -z.conjugate()) - liouville_g(q, z).conjugate()) < 1e-12


def test_liouville_g_singular_at_turning_point():
    with pytest.raises(DomainError):
        liouville_g(build_quad_diff(2, 1), 1.0)


def test_h0_constant_field_zero():
    h0, err = h0_bound(ComplexPolynomial([2.0]), [[1.0, 5.0, 9.0]], s=0.5)
    assert h0 == 0.0


def test_h0_tail_stability():
    q = build_quad_diff(2, 1)
    curve_a = [2.0 + 0.1 * k for k in range(481)]  # [2, 50]
    curve_b = [2.0 + 0.1 * k for k in range(981)]  # [2, 100]
    a, _ = h0_bound(q, [curve_a], s=0.5)
    b, _ = h0_bound(q, [curve_b], s=0.5)
    assert abs(b - a) / a < 0.01


def test_h0_quadratic_scaling():
    # replacing Q by 4Q: g scales by 1/4 per Q^2 in the denominator against
    # Q'^2/Q^3 etc; |d zeta| doubles, so the integrand halves pointwise
    q = build_quad_diff(2, 1).polynomial
    q4 = ComplexPolynomial([4 * c for c in q.coefficients])
    z = 2.3
    val = abs(liouville_g(q, z)) * math.sqrt(abs(q(z)))
    val4 = abs(liouville_g(q4, z)) * math.sqrt(abs(q4(z)))
    assert abs(val4 - 0.5 * val) < 1e-12


def test_wkb_approximant_exact_for_constant_field():
    params = WKBParameters(h=3.0, h0=0.0, s=0.3)
    curve = [0.0, -1.0, -2.0]
    got = wkb_approximant(ComplexPolynomial([1.0]), params, curve, -1.5)
    assert abs(got.value - math.exp(-4.5)) < 1e-12
    assert got.certificate == 0.0


def test_wkb_certificate_monotone_in_h():
    p20 = WKBParameters(h=20.0, h0=0.3, s=0.5)
    p40 = WKBParameters(h=40.0, h0=0.3, s=0.5)
    assert p40.certificate() <= p20.certificate()


def test_wkb_certificate_unavailable():
    with pytest.raises(CertificateError):
        WKBParameters(h=1.0, h0=2.0, s=0.5).certificate()


def test_successive_epsilon_tightens_certificate():
    from stokeszeros.wkb import successive_epsilon

    q = build_quad_diff(2, 1)
    curve = [2.0 + 0.35 * k for k in range(138)]
    h0, _ = h0_bound(q, [curve], s=0.5)
    params = WKBParameters(h=20.0, h0=h0, s=0.5)
    eps, iters = successive_epsilon(q, params, curve)
    worst = max(abs(e) for e in eps)
    assert iters < 50  # geometric convergence
    assert worst <= params.certificate()
    # the refined error must flatter the certificate, not contradict it
    assert worst > 0


def test_growth_bound_trivial_cases():
    assert growth_bound(0.5, -0.25, 2.0, 0.0, 7.0) == 0.5
    assert abs(growth_bound(1.0, 0.0, 1.0, 1.0, 1.0) - math.e) < 1e-12


def test_growth_bound_dominates_cosh():
    # y'' = y with y(0)=1, y'(0)=0 has |y(1)| = cosh(1) <= e
    assert math.cosh(1.0) <= growth_bound(1.0, 0.0, 1.0, 1.0, 1.0)
