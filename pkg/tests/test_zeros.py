import numpy as np
import pytest

from stokeszeros.errors import GeometryError
from stokeszeros.polynomials import ComplexPolynomial, roots
from stokeszeros.spectral import EigenfunctionEvaluator, ProblemSpec, rescale, solve_eigenpair
from stokeszeros.stokescomplex import stokes_complex
from stokeszeros.zeros import (
    compare_to_limit,
    count_zeros_rect,
    empirical_measure,
    hille_disc_check,
    locate_zeros,
)

HARMONIC = ProblemSpec(2, 1)


def test_count_double_zero():
    p = ComplexPolynomial([0, 0, 1])
    assert count_zeros_rect(p, (-1, 1, -1, 1)) == 2


def test_count_two_simple_roots():
    p = ComplexPolynomial.from_roots([0.5, -0.3j])
    assert count_zeros_rect(p, (-0.55, 0.55, -0.55, 0.55)) == 2


def test_count_rescaled_hermite_pair():
    pair = solve_eigenpair(HARMONIC, 2)
    resc = rescale(EigenfunctionEvaluator(pair))
    # zeros at +/- 1/sqrt(10) ~ +/- 0.3162
    assert count_zeros_rect(resc, (-0.5, 0.5, -0.5, 0.5)) == 2


def test_locate_double_zero_merges_multiplicity():
    zs = locate_zeros(ComplexPolynomial([0, 0, 1]), (-1, 1, -1, 1), resolution=1e-3)
    assert len(zs.zeros) == 1
    z, m = zs.zeros[0]
    assert m == 2
    assert abs(z) < 1e-3


def test_locate_hermite4_zeros():
    pair = solve_eigenpair(HARMONIC, 4)
    resc = rescale(EigenfunctionEvaluator(pair))
    zs = locate_zeros(resc, (-1.05, 1.05, -0.08, 0.08), resolution=0.01)
    got = sorted(z.real for z, _ in zs.zeros)
    # H4 roots scaled by 1/sqrt(9)
    expected = [-0.5502267, -0.1748825, 0.1748825, 0.5502267]
    assert len(got) == 4
    for g, e in zip(got, expected):
        assert abs(g - e) < 1e-7
    assert max(abs(z.imag) for z, _ in zs.zeros) < 1e-8


def test_locate_matches_roots_oracle_on_random_polynomials():
    rng = np.random.default_rng(23)
    for _ in range(12):
        deg = int(rng.integers(3, 9))
        coeffs = rng.standard_normal(deg + 1) + 1j * rng.standard_normal(deg + 1)
        p = ComplexPolynomial(list(coeffs))
        zs = locate_zeros(p, (-1.6, 1.6, -1.6, 1.6), resolution=1e-3)
        x0, x1, y0, y1 = zs.window
        oracle = [
            r
            for r, m in roots(p)
            for _ in range(m)
            if x0 < r.real < x1 and y0 < r.imag < y1
        ]
        got = [z for z, m in zs.zeros for _ in range(m)]
        assert len(got) == len(oracle)
        for r in oracle:
            assert min(abs(r - g) for g in got) < 1e-8


def test_count_conservation_through_subdivision():
    # implicit in locate_zeros: totals match an independent full count
    p = ComplexPolynomial.from_roots([0.3 + 0.4j, -0.2 - 0.7j, 0.9, -1.1 + 0.2j])
    zs = locate_zeros(p, (-1.5, 1.5, -1.5, 1.5), resolution=1e-3)
    assert zs.total_count == count_zeros_rect(p, zs.window)


def test_empirical_measure_mass():
    pair = solve_eigenpair(HARMONIC, 5)
    resc = rescale(EigenfunctionEvaluator(pair))
    zs = locate_zeros(resc, (-1.05, 1.05, -0.08, 0.08), resolution=0.01)
    em = empirical_measure(zs, 5)
    assert zs.total_count == 5
    assert abs(em.mass - 1.0) < 1e-12


def test_empirical_measure_single_zero_ground_pair():
    pair = solve_eigenpair(HARMONIC, 1)
    resc = rescale(EigenfunctionEvaluator(pair))
    zs = locate_zeros(resc, (-0.6, 0.6, -0.3, 0.3), resolution=0.01)
    assert zs.total_count == 1
    assert abs(zs.zeros[0][0]) < 1e-8


def test_pt_zero_set_symmetry():
    spec = ProblemSpec(3, 1)
    pair = solve_eigenpair(spec, 6)
    resc = rescale(EigenfunctionEvaluator(pair))
    zs = locate_zeros(resc, (-1.3, 1.3, -1.3, 0.4), resolution=0.01)
    assert zs.total_count >= 6
    pos = [z for z, _ in zs.zeros]
    for z in pos:
        assert min(abs(-z.conjugate() - w) for w in pos) < 1e-6


def test_compare_to_limit_self_consistency():
    # atoms placed at the inverse-CDF quantiles of the limit law on E0
    sc = stokes_complex(2, 1)
    from stokeszeros.wkb import arc_mass_profile

    e0 = sc.lines[sc.e0_index].samples
    s, cum = arc_mass_profile(sc.quaddiff, e0)
    n = 60
    targets = (np.arange(n) + 0.5) / n * cum[-1]
    spots = np.interp(targets, cum, s)
    pts = np.interp(spots, s, np.real(np.asarray(e0)))  # E0 is the real segment
    zs_fake = tuple((complex(x, 0.0), 1) for x in sorted(pts))
    from stokeszeros.zeros import EmpiricalMeasure, ZeroSet

    em = EmpiricalMeasure(ZeroSet(zeros=zs_fake, window=(-1.1, 1.1, -0.1, 0.1)), n)
    rep = compare_to_limit(em, sc)
    assert rep.near_fraction == 1.0
    assert rep.arcs[0].ks_distance <= 1.0 / n + 1e-9


def test_compare_harmonic_sample():
    pair = solve_eigenpair(HARMONIC, 20)
    resc = rescale(EigenfunctionEvaluator(pair))
    zs = locate_zeros(resc, (-1.05, 1.05, -0.08, 0.08), resolution=0.01)
    sc = stokes_complex(2, 1)
    rep = compare_to_limit(empirical_measure(zs, 20), sc)
    assert rep.near_fraction == 1.0
    assert rep.arcs[0].ks_distance <= 0.1


def test_near_support_fraction_nondecreasing():
    # concentration onto the exceptional set improves with the index
    spec = ProblemSpec(4, 1)
    sc = stokes_complex(4, 1)
    window = (-1.2, 1.2, -1.2, 1.2)
    fractions = []
    for n in (6, 12, 24):
        resc = rescale(EigenfunctionEvaluator(solve_eigenpair(spec, n)))
        zs = locate_zeros(resc, window, resolution=0.02)
        rep = compare_to_limit(empirical_measure(zs, n), sc, delta=0.1)
        fractions.append(rep.near_fraction)
    assert fractions[0] <= fractions[1] + 1e-9
    assert fractions[1] <= fractions[2] + 1e-9


def test_hille_disc_harmonic():
    pair = solve_eigenpair(HARMONIC, 8)
    resc = rescale(EigenfunctionEvaluator(pair))
    zs = locate_zeros(resc, (-1.05, 1.05, -0.08, 0.08), resolution=0.01)
    assert hille_disc_check(zs, 0.9)


def test_hille_radius_domain():
    zs = locate_zeros(ComplexPolynomial([0, 1]), (-1, 1, -1, 1), resolution=1e-3)
    with pytest.raises(GeometryError):
        hille_disc_check(zs, 1.5)
