import cmath
import math

import numpy as np
import pytest

from stokeszeros.errors import DomainError
from stokeszeros.quaddiff import (
    build_quad_diff,
    launch_directions,
    stokes_directions,
    trace_trajectory,
    turning_points,
)
from stokeszeros.stokescomplex import (
    HALF_PLANE,
    canonical_pair,
    is_admissible,
    stokes_complex,
)


def test_build_coefficients():
    assert build_quad_diff(2, 1).polynomial.coefficients == (-1 + 0j, 0j, 1 + 0j)
    assert build_quad_diff(4, 2).polynomial.coefficients == (-1 + 0j, 0j, 0j, 0j, 1 + 0j)
    assert build_quad_diff(3, 1).polynomial.coefficients == (-1 + 0j, 0j, 0j, 1j)


def test_build_rejects_bad_ell():
    with pytest.raises(DomainError):
        build_quad_diff(4, 4)
    with pytest.raises(DomainError):
        build_quad_diff(4, 0)


def test_turning_points_families():
    assert turning_points(build_quad_diff(2, 1)) == [1, -1]
    got = turning_points(build_quad_diff(4, 2))
    expected = [-1j, 1, 1j, -1]
    assert all(abs(g - e) < 1e-12 for g, e in zip(got, expected))
    got31 = turning_points(build_quad_diff(3, 1))
    expected31 = [cmath.exp(-5j * math.pi / 6), cmath.exp(-1j * math.pi / 6), 1j]
    assert all(abs(g - e) < 1e-12 for g, e in zip(got31, expected31))


def test_stokes_directions_harmonic():
    sd = stokes_directions(2, 1)
    assert sorted(round(a / math.pi, 6) for a in sd.stokes) == [-0.75, -0.25, 0.25, 0.75]
    assert sorted(round(a / math.pi, 6) for a in sd.anti_stokes) == [-0.5, 0.0, 0.5, 1.0]
    assert sd.boundary_rays == (math.pi, 0.0)


def test_boundary_rays_cubic():
    sd = stokes_directions(3, 1)
    left, right = sd.boundary_rays
    assert abs(right - (-math.pi / 2 + 2 * math.pi / 5)) < 1e-12
    assert abs(left - (-math.pi / 2 - 2 * math.pi / 5)) < 1e-12


def test_trace_real_segment():
    q = build_quad_diff(2, 1)
    line = trace_trajectory(q, 1.0, math.pi)
    tps = turning_points(q)
    assert line.terminal is not None
    assert abs(tps[line.terminal] + 1) < 1e-12
    assert max(abs(s.imag) for s in line.samples) < 1e-9


def test_trace_axis_ray():
    q = build_quad_diff(4, 2)
    line = trace_trajectory(q, 1j, math.pi / 2)
    assert line.terminal is None
    assert abs(line.terminal_angle - math.pi / 2) < 1e-9
    assert max(abs(s.real) for s in line.samples) < 1e-9


def test_trace_short_line_cubic():
    q = build_quad_diff(3, 1)
    tps = turning_points(q)
    v = tps[1]  # exp(-i pi/6)
    hits = []
    for phi in launch_directions(q, v):
        ln = trace_trajectory(q, v, phi, origin_index=1)
        if ln.is_short:
            hits.append(ln)
    assert len(hits) == 1
    assert abs(tps[hits[0].terminal] - cmath.exp(-5j * math.pi / 6)) < 1e-9


def test_trace_drift_and_monotone_phase():
    q = build_quad_diff(3, 1)
    v = turning_points(q)[1]
    for phi in launch_directions(q, v):
        ln = trace_trajectory(q, v, phi, origin_index=1)
        assert abs(ln.re_zeta_drift) < 1e-6
        # vertical-trajectory property: Im zeta strictly increases, which
        # for a unit-speed trace means consecutive samples never repeat
        w = cmath.sqrt(q(ln.samples[1]))
        imz = 0.0
        prev = ln.samples[1]
        increments = []
        for z in ln.samples[2:-1]:
            wn = cmath.sqrt(q(z))
            if abs(wn - w) > abs(wn + w):
                wn = -wn
            increments.append(((w + wn) / 2 * (z - prev)).imag)
            prev, w = z, wn
        increments = np.asarray(increments)
        assert np.all(increments > 0) or np.all(increments < 0)


def test_complex_census_2_1():
    sc = stokes_complex(2, 1)
    assert len(sc.turning_points) == 2
    assert len(sc.lines) == 5
    assert sum(1 for ln in sc.lines if ln.is_short) == 1
    assert sc.half_plane_count == 4
    assert sc.strip_count == 0


def test_complex_census_4_2():
    sc = stokes_complex(4, 2)
    assert sc.half_plane_count == 6
    shorts = [ln for ln in sc.lines if ln.is_short]
    assert len(shorts) == 1
    a, b = shorts[0].endpoints()
    assert {round(a.real), round(b.real)} == {-1, 1}
    axis = [ln for ln in sc.lines if ln.axis_ray]
    assert len(axis) == 2


@pytest.mark.parametrize("d,ell", [(2, 1), (3, 1), (4, 1), (4, 2), (6, 1), (6, 3)])
def test_half_plane_region_count(d, ell):
    sc = stokes_complex(d, ell)
    assert sc.half_plane_count == d + 2
    assert sc.strip_count == len(sc.regions) - (d + 2)


def test_exceptional_set_2_1():
    sc = stokes_complex(2, 1)
    exc = sc.exceptional_lines
    assert exc == [sc.e0_index]
    assert not any(ln.axis_ray for ln in sc.lines)
    assert {sc.turning_points[sc.v_plus], sc.turning_points[sc.v_minus]} == {1, -1}


def test_exceptional_set_4_2():
    sc = stokes_complex(4, 2)
    exc = sc.exceptional_lines
    assert len(exc) == 3  # short line plus both axis rays
    assert sc.lines[sc.e0_index].is_short
    axis_flags = [i for i in exc if sc.lines[i].axis_ray]
    assert len(axis_flags) == 2


def test_exceptional_set_3_1():
    sc = stokes_complex(3, 1)
    exc = sc.exceptional_lines
    assert len(exc) == 2
    kinds = {sc.lines[i].is_short for i in exc}
    assert kinds == {True, False}
    ray = next(i for i in exc if not sc.lines[i].is_short)
    assert abs(sc.lines[ray].terminal_angle - math.pi / 2) < 1e-9


def test_one_exceptional_per_turning_point():
    for d, ell in [(3, 1), (4, 1), (4, 2), (6, 2)]:
        sc = stokes_complex(d, ell)
        assert len(sc.exceptional_lines) == len(sc.turning_points) - 1


def test_short_line_mirror_pairing():
    for d, ell in [(4, 1), (6, 1)]:
        sc = stokes_complex(d, ell)
        tps = sc.turning_points
        for k, v in enumerate(tps):
            if abs(v.real) < 1e-9:
                continue
            partners = [
                ln
                for ln in sc.lines
                if ln.is_short and k in (ln.origin, ln.terminal)
            ]
            assert len(partners) == 1
            ln = partners[0]
            other = ln.terminal if ln.origin == k else ln.origin
            assert abs(tps[other] - (-v.conjugate())) < 1e-6


def test_admissible_real_segment():
    q = build_quad_diff(2, 1)
    # distance to the turning point at 1 is the binding constraint here
    assert is_admissible([2.0, 2.5, 3.0], q, s=0.9)
    assert not is_admissible([2.0, 2.5, 3.0], q, s=1.01)
    # far from the turning points the vertical foliation allows any margin
    # short of a right angle against the horizontal tangent
    assert is_admissible([3.0, 3.5, 4.0], q, s=math.pi / 2 - 0.05)
    assert not is_admissible([3.0, 3.5, 4.0], q, s=math.pi / 2 + 0.01)


def test_admissible_rejects_trajectory_piece():
    q = build_quad_diff(2, 1)
    line = trace_trajectory(q, 1.0, math.pi / 3)
    piece = [z for z in line.samples if abs(z - 1) > 0.8][:60]
    res = is_admissible(piece, q, s=0.1)
    assert not res.admissible
    assert res.first_violation[1] == "foliation-angle"


def test_admissible_rejects_turning_point_contact():
    q = build_quad_diff(2, 1)
    res = is_admissible([0.5, 1.0, 1.5], q, s=0.01)
    assert not res.admissible


def test_canonical_pair_omega_minus_plus_none():
    for d, ell in [(2, 1), (6, 1)]:
        sc = stokes_complex(d, ell)
        assert canonical_pair(sc, sc.omega_minus, sc.omega_plus) is None


def test_canonical_pair_all_others_pairable():
    sc = stokes_complex(6, 1)
    for r in sc.regions:
        if r.kind != HALF_PLANE:
            continue
        if r.index != sc.omega_minus:
            assert canonical_pair(sc, sc.omega_plus, r.index) is not None
        if r.index != sc.omega_plus:
            assert canonical_pair(sc, sc.omega_minus, r.index) is not None


def test_mirror_symmetry_of_line_set():
    for d, ell in [(3, 1), (4, 1), (6, 2)]:
        sc = stokes_complex(d, ell)
        assert sc.mirror_deviation <= 1e-4


def test_exceptional_distance_field():
    sc = stokes_complex(2, 1)
    assert sc.distance_to_exceptional(0.0) < 1e-12
    assert abs(sc.distance_to_exceptional(2.0) - 1.0) < 1e-9
    assert abs(sc.distance_to_exceptional(1j) - 1.0) < 1e-3


def test_perturbation_stability_of_admissibility():
    # an admissible curve for the canonical differential stays admissible
    # with half the margin under small coefficient perturbations
    q = build_quad_diff(2, 1)
    curve = [2.2 + 0.2 * k for k in range(20)]
    s = 0.6
    assert is_admissible(curve, q, s)
    for h in (0.01, 0.05, 0.1):
        qp = build_quad_diff(2, 1, perturbation=[h * (1 + 1j), -h * 0.5j])
        assert is_admissible(curve, qp, s / 2)


def test_serialization_roundtrip_fields():
    sc = stokes_complex(3, 1)
    d = sc.to_dict()
    assert d["census"]["half_plane_regions"] == 5
    assert len(d["lines"]) == len(sc.lines)
    assert any(ln["is_exceptional"] for ln in d["lines"])
    assert {r["label"] for r in d["regions"]} >= {"omega+", "omega-"}
