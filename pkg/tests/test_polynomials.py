import cmath
import math

import numpy as np
import pytest

from stokeszeros.errors import DomainError
from stokeszeros.polynomials import ComplexPolynomial, beta, gamma, gamma_beta, roots


def test_evaluate_simple():
    p = ComplexPolynomial([-1, 0, 1])  # z^2 - 1
    assert p(2) == 3
    assert p(1 + 1j) == -1 + 2j


def test_evaluate_cubic_at_i():
    p = ComplexPolynomial([-1, 0, 0, 1j])  # i z^3 - 1
    assert abs(p(1j)) < 1e-15


def test_roots_quadratic():
    got = roots(ComplexPolynomial([-1, 0, 1]))
    assert got == [((1 + 0j), 1), ((-1 + 0j), 1)]


def test_roots_cubic_roots_of_minus_i():
    got = roots(ComplexPolynomial([-1, 0, 0, 1j]))
    expected = [cmath.exp(-5j * math.pi / 6), cmath.exp(-1j * math.pi / 6), 1j]
    assert len(got) == 3
    for (r, m), e in zip(got, expected):
        assert m == 1
        assert abs(r - e) < 1e-12


def test_roots_double():
    got = roots(ComplexPolynomial([4, -4, 1]))
    assert len(got) == 1
    r, m = got[0]
    assert m == 2
    assert abs(r - 2) < 1e-7


def test_roots_constant_rejected():
    with pytest.raises(DomainError):
        roots(ComplexPolynomial([3.0]))


def test_roots_recover_random_factors():
    # expand random linear factors, re-find the factor multiset
    rng = np.random.default_rng(7)
    for _ in range(25):
        deg = int(rng.integers(2, 9))
        pts = []
        while len(pts) < deg:
            cand = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            if all(abs(cand - q) > 1e-2 for q in pts):
                pts.append(cand)
        lead = complex(rng.uniform(0.5, 2), rng.uniform(-1, 1))
        p = ComplexPolynomial.from_roots(pts, leading=lead)
        got = roots(p, tol=1e-10)
        assert sum(m for _, m in got) == deg
        found = [r for r, _ in got]
        for target in pts:
            assert min(abs(target - f) for f in found) < 1e-8


def test_roots_against_numpy_cross_check():
    rng = np.random.default_rng(11)
    for _ in range(10):
        coeffs = rng.standard_normal(7) + 1j * rng.standard_normal(7)
        p = ComplexPolynomial(list(coeffs))
        mine = sorted((r for r, _ in roots(p)), key=lambda z: (z.real, z.imag))
        ref = sorted(np.roots(coeffs[::-1]), key=lambda z: (z.real, z.imag))
        for a, b in zip(mine, ref):
            assert abs(a - b) < 1e-7


def test_taylor_shift():
    p = ComplexPolynomial([-1, 0, 1])
    assert p.taylor_coefficients(3) == [8 + 0j, 6 + 0j, 1 + 0j]
    q = ComplexPolynomial([1j, 2, 0, -1])
    z0 = 0.3 - 0.7j
    shifted = q.taylor_coefficients(z0)
    for t in (0.1, -0.2 + 0.4j):
        direct = q(z0 + t)
        via = sum(c * t**k for k, c in enumerate(shifted))
        assert abs(direct - via) < 1e-13 * (1 + abs(direct))


def test_gamma_half_integer():
    assert abs(gamma(1.5) - math.sqrt(math.pi) / 2) < 1e-13


def test_gamma_seven_quarters_vs_independent_oracle():
    # math.gamma is an independent C implementation
    assert abs(gamma(1.75) - math.gamma(1.75)) < 1e-12 * math.gamma(1.75)
    assert abs(gamma(1.75) - 0.9190625268488832) < 1e-10


def test_beta_three_halves_one_half():
    g, b = gamma_beta(1.5, 0.5)
    assert abs(b - math.pi / 2) < 1e-12
    # independent oracle: integral of t^{1/2}(1-t)^{-1/2}, substitution t=sin^2(s)
    s = np.linspace(0, math.pi / 2, 20001)
    integrand = 2 * np.sin(s) ** 2
    oracle = np.trapezoid(integrand, s)
    assert abs(b - oracle) < 1e-8


def test_gamma_recurrence_property():
    for x in np.linspace(0.1, 5.0, 50):
        assert abs(gamma(x + 1) - x * gamma(x)) < 1e-12 * gamma(x + 1)


def test_beta_symmetry():
    for x, y in [(0.25, 1.5), (1.5, 1.0 / 3), (2.3, 0.9)]:
        assert beta(x, y) == beta(y, x)


def test_gamma_rejects_nonpositive():
    with pytest.raises(DomainError):
        gamma(0.0)
    with pytest.raises(DomainError):
        beta(-1.0, 2.0)
