"""The quadratic differentials ((-1)^l (iz)^d - 1) dz^2 and their trajectories.

A vertical trajectory is a curve along which Q(z) dz^2 < 0; under any branch
of zeta = int sqrt(Q) dz it maps to a vertical line.  The tracer follows the
unit-speed direction field i * conj(w)/|w| with w a continuously tracked
branch of sqrt(Q), so Re(zeta) is conserved up to integration error and
Im(zeta) grows strictly monotonically.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

from .errors import DomainError, TraceError
from .polynomials import ComplexPolynomial, roots

__all__ = [
    "QuadDiff",
    "build_quad_diff",
    "turning_points",
    "StokesDirections",
    "stokes_directions",
    "TraceCaps",
    "StokesLine",
    "trace_trajectory",
    "launch_directions",
]


def _wrap(angle: float) -> float:
    """Reduce an angle to (-pi, pi]."""
    a = math.fmod(angle + math.pi, 2 * math.pi)
    if a <= 0:
        a += 2 * math.pi
    return a - math.pi


@dataclass(frozen=True)
class QuadDiff:
    """Coefficient polynomial of a quadratic differential Q(z) dz^2."""

    d: int
    ell: int
    polynomial: ComplexPolynomial

    def __call__(self, z: complex) -> complex:
        return self.polynomial(z)

    @property
    def is_canonical(self) -> bool:
        """True when the polynomial is exactly (-1)^ell (iz)^d - 1."""
        return self.polynomial.coefficients == _canonical_coefficients(self.d, self.ell)


def _canonical_coefficients(d: int, ell: int) -> tuple:
    # i^d cycles over {1, i, -1, -i}; keep it exact
    unit = (1 + 0j, 1j, -1 + 0j, -1j)[d % 4]
    lead = unit * (-1) ** ell
    coeffs = [0j] * (d + 1)
    coeffs[0] = -1 + 0j
    coeffs[d] = lead
    return tuple(coeffs)


def build_quad_diff(d: int, ell: int, perturbation=None) -> QuadDiff:
    """The differential ((-1)^ell (iz)^d - 1) dz^2.

    Parameters
    ----------
    d : int
        Degree, at least 2.
    ell : int
        Boundary index with 1 <= ell <= d - 1.
    perturbation : sequence of complex, optional
        Extra coefficients (ascending, length <= d) added to the canonical
        polynomial; used for stability experiments.
    """
    if d < 2:
        raise DomainError(f"degree must be >= 2, got {d}")
    if not 1 <= ell <= d - 1:
        raise DomainError(f"ell must satisfy 1 <= ell <= d-1, got ell={ell}, d={d}")
    coeffs = list(_canonical_coefficients(d, ell))
    if perturbation is not None:
        pert = list(perturbation)
        if len(pert) > d + 1:
            raise DomainError("perturbation degree exceeds d")
        for k, c in enumerate(pert):
            coeffs[k] += complex(c)
    return QuadDiff(d, ell, ComplexPolynomial(coeffs))


@lru_cache(maxsize=64)
def _turning_points_cached(coeffs: tuple) -> tuple:
    got = roots(ComplexPolynomial(list(coeffs)), tol=1e-13)
    out = []
    for r, m in got:
        out.extend([r] * m)
    return tuple(out)


def turning_points(q: QuadDiff) -> list:
    """Zeros of Q, sorted by argument (ties by modulus)."""
    return list(_turning_points_cached(q.polynomial.coefficients))


@dataclass(frozen=True)
class StokesDirections:
    """Asymptotic directions of the Stokes geometry at infinity."""

    stokes: tuple
    anti_stokes: tuple
    boundary_rays: tuple  # (left ray toward omega-, right ray toward omega+)


def stokes_directions(d: int, ell: int) -> StokesDirections:
    """Stokes directions, their bisectors, and the two boundary rays.

    The d+2 Stokes directions are theta_k = -pi/2 + pi (ell + 2k)/(d+2);
    anti-Stokes directions bisect adjacent ones.  The boundary rays
    -pi/2 +/- (ell+1) pi/(d+2) are the anti-Stokes directions along which
    solutions are required to decay.
    """
    if d < 2 or not 1 <= ell <= d - 1:
        raise DomainError(f"invalid (d, ell) = ({d}, {ell})")
    n = d + 2
    stokes = tuple(_wrap(-math.pi / 2 + math.pi * (ell + 2 * k) / n) for k in range(n))
    anti = tuple(_wrap(-math.pi / 2 + math.pi * (ell + 2 * k + 1) / n) for k in range(n))
    right = _wrap(-math.pi / 2 + (ell + 1) * math.pi / n)
    left = _wrap(-math.pi / 2 - (ell + 1) * math.pi / n)
    return StokesDirections(stokes, anti, (left, right))


def launch_directions(q: QuadDiff, v: complex) -> list:
    """Tangent angles of the three Stokes lines at a simple turning point.

    Near v the local expansion Q ~ Q'(v)(z - v) puts the line tangents at
    the solutions of arg Q'(v) + 3 phi = pi (mod 2 pi).
    """
    dq = q.polynomial.derivative()(v)
    if dq == 0:
        raise DomainError("turning point is not simple")
    base = (math.pi - cmath.phase(dq)) / 3.0
    return [_wrap(base + 2 * math.pi * k / 3.0) for k in range(3)]


@dataclass(frozen=True)
class TraceCaps:
    """Scale-aware limits for a trajectory trace."""

    escape_radius: float
    capture_radius: float
    launch_offset: float
    max_arclength: float
    step_tol: float = 1e-10

    @staticmethod
    def for_diff(q: QuadDiff) -> "TraceCaps":
        tps = turning_points(q)
        rmax = max(abs(v) for v in tps)
        if len(tps) > 1:
            minsep = min(
                abs(a - b) for i, a in enumerate(tps) for b in tps[i + 1 :]
            )
        else:
            minsep = max(rmax, 1.0)
        escape = 10.0 * rmax + 10.0
        return TraceCaps(
            escape_radius=escape,
            capture_radius=1e-3 * minsep,
            launch_offset=1e-6 * max(1.0, rmax),
            max_arclength=6.0 * escape + 20.0,
        )


@dataclass
class StokesLine:
    """A traced Stokes line (trajectory with an end at a turning point)."""

    origin: int
    samples: list
    terminal: Optional[int]  # turning-point index, or None for infinity
    terminal_angle: Optional[float]  # asymptotic Stokes direction if unbounded
    launch_angle: float
    is_short: bool
    is_exceptional: bool = False
    re_zeta_drift: float = 0.0
    axis_ray: bool = field(default=False)

    @property
    def unbounded(self) -> bool:
        return self.terminal is None

    def endpoints(self) -> tuple:
        return self.samples[0], self.samples[-1]


# Dormand-Prince 5(4) tableau
_DP_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_DP_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_DP_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_DP_B4 = (
    5179 / 57600,
    0.0,
    7571 / 16695,
    393 / 640,
    -92097 / 339200,
    187 / 2100,
    1 / 40,
)


class _BranchTracker:
    """Continuously tracked branch of sqrt(Q) along the trace."""

    def __init__(self, q: QuadDiff, w0: complex):
        self.q = q
        self.w = w0

    def sqrt_at(self, z: complex, ref: complex) -> complex:
        w = cmath.sqrt(self.q(z))
        if abs(w - ref) > abs(w + ref):
            w = -w
        return w

    def velocity(self, z: complex, ref: complex) -> tuple:
        w = self.sqrt_at(z, ref)
        mag = abs(w)
        if mag == 0:
            raise TraceError("trajectory hit a turning point exactly")
        return 1j * w.conjugate() / mag, w


def trace_trajectory(
    q: QuadDiff,
    start: complex,
    initial_direction: float,
    caps: Optional[TraceCaps] = None,
    origin_index: Optional[int] = None,
) -> StokesLine:
    """Trace one vertical trajectory until capture or escape.

    Parameters
    ----------
    q : QuadDiff
    start : complex
        A turning point (a launch offset is applied internally) or a
        regular point on the trajectory.
    initial_direction : float
        Tangent angle at the start; for a turning point this should be one
        of :func:`launch_directions`.
    caps : TraceCaps, optional
        Escape/capture/step limits; derived from the geometry by default.

    Returns
    -------
    StokesLine
        With ``terminal`` the index of the captured turning point, or None
        plus the matched asymptotic Stokes direction when unbounded.
    """
    caps = caps or TraceCaps.for_diff(q)
    tps = turning_points(q)
    dirs = stokes_directions(q.d, q.ell).stokes if q.is_canonical else None

    # launch: offset away from a turning point along the requested tangent
    start = complex(start)
    tangent = cmath.exp(1j * initial_direction)
    origin = origin_index
    z = start
    for idx, v in enumerate(tps):
        if abs(start - v) <= 1e-9 * max(1.0, abs(v)):
            z = v + caps.launch_offset * tangent
            if origin is None:
                origin = idx
            break

    w = cmath.sqrt(q(z))
    vel = 1j * w.conjugate() / abs(w)
    if (vel / tangent).real < 0:
        w = -w
    tracker = _BranchTracker(q, w)

    samples = [z]
    zeta_re_drift = 0.0
    arclength = 0.0
    h = max(caps.launch_offset, 1e-6)
    terminal = None
    terminal_angle = None
    w_cur = w
    # the launch point sits inside its own capture disc; arm it after leaving
    origin_armed = origin is None

    def nearest_tp(pt):
        best, best_d = -1, math.inf
        for i, v in enumerate(tps):
            dist = abs(pt - v)
            if dist < best_d:
                best, best_d = i, dist
        return best, best_d

    max_steps = 400_000
    for _ in range(max_steps):
        _, dist = nearest_tp(z)
        h = min(h, 0.25 * dist, 0.35)
        if h < 1e-15 * (1 + abs(z)):
            raise TraceError("step underflow near a singular point", partial=samples)

        # one adaptive DP5(4) attempt
        while True:
            ks = []
            ref = w_cur
            ok = True
            for i in range(7):
                zi = z
                for j, aij in enumerate(_DP_A[i]):
                    zi += h * aij * ks[j]
                try:
                    vel, ref = tracker.velocity(zi, ref)
                except TraceError:
                    ok = False
                    break
                ks.append(vel)
            if not ok:
                h *= 0.3
                continue
            z5 = z
            z4 = z
            for i in range(7):
                z5 += h * _DP_B5[i] * ks[i]
                z4 += h * _DP_B4[i] * ks[i]
            err = abs(z5 - z4)
            tol = caps.step_tol * max(h, 1e-3)
            if err <= tol or h <= 1e-13 * (1 + abs(z)):
                break
            h *= max(0.2, min(0.9 * (tol / max(err, 1e-300)) ** 0.2, 0.8))

        # accepted: update branch along the chord with a Simpson phase check
        w_mid = tracker.sqrt_at(0.5 * (z + z5), w_cur)
        w_new = tracker.sqrt_at(z5, w_mid)
        dzeta = (w_cur + 4 * w_mid + w_new) / 6.0 * (z5 - z)
        zeta_re_drift += dzeta.real
        z = z5
        w_cur = w_new
        arclength += h
        samples.append(z)

        grow = 0.9 * (tol / max(err, 1e-300)) ** 0.2
        h = h * max(0.3, min(grow, 4.0))

        idx, dist = nearest_tp(z)
        if not origin_armed and (idx != origin or dist > 5 * caps.capture_radius):
            origin_armed = True
        if dist <= caps.capture_radius and (origin_armed or idx != origin):
            terminal = idx
            samples.append(tps[idx])
            break
        if abs(z) >= caps.escape_radius:
            ang = cmath.phase(z)
            if dirs is not None:
                best = min(dirs, key=lambda t: abs(_wrap(ang - t)))
                if abs(_wrap(ang - best)) > math.radians(5.0):
                    raise TraceError(
                        f"escape angle {ang:.4f} matches no Stokes direction",
                        partial=samples,
                    )
                terminal_angle = best
            else:
                terminal_angle = ang
            break
        if arclength > caps.max_arclength:
            raise TraceError("trace exceeded arclength cap", partial=samples)
    else:
        raise TraceError("trace exceeded step budget", partial=samples)

    return StokesLine(
        origin=origin if origin is not None else -1,
        samples=samples,
        terminal=terminal,
        terminal_angle=terminal_angle,
        launch_angle=initial_direction,
        is_short=terminal is not None,
        re_zeta_drift=zeta_re_drift,
    )
