"""Zero location by the argument principle and empirical zero measures.

Winding numbers over rectangle boundaries drive a quadtree subdivision
until every cell isolates one zero (then Newton-polished) or bottoms out at
the resolution (then reported with its multiplicity).  Boundaries are
sampled pointwise: each sample must be independently accurate (plain
callables trivially are; eigenfunction evaluators anchor every evaluation),
so the wrapped phase increments telescope and per-sample errors cancel.
Base densities follow the local wavenumber and refinement fires on large
phase or modulus jumps, which rules out silently aliased turns.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import GeometryError, IntegrationError
from .geometry import nearest_on_polyline, wrap_angle
from .wkb import arc_mass_profile

__all__ = [
    "ZeroSet",
    "EmpiricalMeasure",
    "count_zeros_rect",
    "locate_zeros",
    "empirical_measure",
    "ComparisonReport",
    "compare_to_limit",
    "hille_disc_check",
]

_NUDGE_STEPS = ((1, 0), (0, 1), (-1, 0), (0, -1), (1, 1))


@dataclass(frozen=True)
class ZeroSet:
    """Zeros with multiplicities inside a rectangular window."""

    zeros: tuple  # ((position, multiplicity), ...), lexicographic order
    window: tuple  # (x0, x1, y0, y1); may differ from the request by nudges

    @property
    def total_count(self) -> int:
        return sum(m for _, m in self.zeros)

    def positions(self) -> list:
        return [z for z, _ in self.zeros]


@dataclass(frozen=True)
class EmpiricalMeasure:
    """Zero counting measure scaled by 1/n."""

    zeroset: ZeroSet
    n: int

    @property
    def mass(self) -> float:
        return self.zeroset.total_count / self.n

    def atoms(self) -> list:
        return [(z, m / self.n) for z, m in self.zeroset.zeros]


# ---------------------------------------------------------------------------
# winding-number drivers


class _ArgAccumulator:
    def __init__(self):
        self.total = 0.0
        self.prev = None
        self.max_jump = 0.0
        self.min_log = math.inf
        self.max_log = -math.inf

    def feed(self, logabs: float, arg: float):
        if logabs < self.min_log:
            self.min_log = logabs
        if logabs > self.max_log:
            self.max_log = logabs
        if self.prev is not None:
            d = wrap_angle(arg - self.prev)
            self.total += d
            self.max_jump = max(self.max_jump, abs(d))
        self.prev = arg


def _rect_loop(rect) -> list:
    x0, x1, y0, y1 = rect
    return [
        complex(x0, y0),
        complex(x1, y0),
        complex(x1, y1),
        complex(x0, y1),
        complex(x0, y0),
    ]


def _winding_from_fetch(fetch, rect, edge_samples) -> float:
    """Total arg change / 2pi along the rectangle boundary.

    ``fetch(z) -> (log|f|, arg f)`` must be an independently accurate point
    evaluation; the winding then telescopes, so individual sample errors
    cancel and only aliasing (prevented by the phase-informed base density
    plus adaptive refinement) could corrupt the count.
    """
    loop = _rect_loop(rect)
    acc = _ArgAccumulator()

    for edge_idx, (a, b) in enumerate(zip(loop[:-1], loop[1:])):
        n = max(8, int(edge_samples[edge_idx]))
        params = [k / n for k in range(n + 1)]
        values = [fetch(a + (b - a) * t) for t in params]
        k = 0
        depth = 0
        while k < len(params) - 1:
            (la, aa), (lb, ab) = values[k], values[k + 1]
            d = wrap_angle(ab - aa)
            if abs(d) > 0.55 * math.pi or abs(lb - la) > 3.0:
                if params[k + 1] - params[k] < 1e-12:
                    raise GeometryError(
                        f"zero on or vanishingly near the boundary at "
                        f"{a + (b - a) * params[k]:.6f}"
                    )
                if depth > 20000:
                    raise GeometryError(
                        f"boundary refinement exploded near {a + (b - a) * params[k]:.6f}"
                    )
                tm = 0.5 * (params[k] + params[k + 1])
                params.insert(k + 1, tm)
                values.insert(k + 1, fetch(a + (b - a) * tm))
                depth += 1
                continue
            k += 1
        # a sharp dip against its neighbours marks a zero hugging the edge
        for j in range(1, len(values) - 1):
            nb = max(values[j - 1][0], values[j + 1][0])
            if values[j][0] - nb < -23.0:
                raise GeometryError("boundary passes too close to a zero")
        for lv, av in values[:-1]:
            acc.feed(lv, av)
    lv, av = fetch(loop[0])
    acc.feed(lv, av)
    return acc.total / (2 * math.pi)


def _fetch_callable(f):
    def fetch(z):
        v = f(z)
        if v == 0:
            raise GeometryError("zero exactly on the counting boundary")
        return math.log(abs(v)), cmath.phase(v)

    return fetch


def _fetch_evaluator(ev):
    def fetch(z):
        st = ev.anchored_state(z)
        if st.y == 0:
            raise GeometryError("zero exactly on the counting boundary")
        return st.log_abs_y(), cmath.phase(st.y)

    return fetch


def _edge_budgets(f, rect):
    """Per-edge base sample counts from the local phase rate."""
    loop = _rect_loop(rect)
    budgets = []
    for a, b in zip(loop[:-1], loop[1:]):
        if hasattr(f, "phase_rate"):
            rate = max(
                f.phase_rate(a + (b - a) * k / 8.0) for k in range(9)
            )
            budgets.append(abs(b - a) * rate / 0.9 + 16)
        else:
            budgets.append(24)
    return budgets


def _winding_callable(f, rect, base_samples: int = 24) -> float:
    """Winding for a plain callable (kept for direct use in tests)."""
    return _winding_from_fetch(
        _fetch_callable(f), rect, [base_samples] * 4
    )


def _winding_evaluator(ev, rect, boost: int = 1) -> float:
    """Winding for a scale-safe evaluator: phase-informed pointwise fetch.

    Every boundary sample is an independently anchored evaluation, so the
    accumulated wrapped increments telescope and per-sample errors cancel;
    the base density keeps the true arg change per interval well under pi
    away from zeros, and refinement plus the modulus-dip guard handle the
    neighbourhoods of zeros.
    """
    budgets = [b * boost for b in _edge_budgets(ev, rect)]
    return _winding_from_fetch(_fetch_evaluator(ev), rect, budgets)


def _winding(f, rect, boost: int = 1) -> float:
    if hasattr(f, "anchored_state"):
        return _winding_evaluator(f, rect, boost)
    return _winding_callable(f, rect, base_samples=24 * boost)


def count_zeros_rect(f, rect, max_refine: int = 3) -> int:
    """Number of zeros of f inside the rectangle (x0, x1, y0, y1).

    The raw boundary quadrature must land within 0.25 of an integer; if it
    does not, the base sampling is doubled before giving up.
    """
    raw = _winding(f, rect)
    for attempt in range(1, max_refine + 1):
        if abs(raw - round(raw)) <= 0.25:
            break
        raw = _winding(f, rect, boost=2**attempt)
    if abs(raw - round(raw)) > 0.25:
        raise GeometryError(f"winding {raw:.3f} is not close to an integer")
    n = int(round(raw))
    if n < 0:
        raise GeometryError(f"negative winding {n}; boundary data inconsistent")
    return n


def _count_with_nudges(f, rect, resolution):
    """Count zeros, shifting the rectangle when a zero sits on the boundary."""
    x0, x1, y0, y1 = rect
    last = None
    for sx, sy in ((0, 0),) + _NUDGE_STEPS:
        dx = 0.37 * resolution * sx
        dy = 0.37 * resolution * sy
        cand = (x0 + dx, x1 + dx, y0 + dy, y1 + dy)
        try:
            return count_zeros_rect(f, cand), cand
        except GeometryError as exc:
            last = exc
    raise GeometryError(f"persistent boundary zero after nudges: {last}")


def _newton_polish(f, z0, rect, resolution):
    x0, x1, y0, y1 = rect
    z = complex(z0)
    if hasattr(f, "newton_step"):
        stepper = lambda w: f.newton_step(w)[1]
    elif hasattr(f, "derivative"):
        df = f.derivative()
        stepper = lambda w: f(w) / df(w)
    else:
        def stepper(w):
            h = 1e-7 * (1.0 + abs(w))
            d = (f(w + h) - f(w - h)) / (2 * h)
            return f(w) / d

    pad = 0.75 * max(x1 - x0, y1 - y0)
    for _ in range(40):
        try:
            step = stepper(z)
        except (ZeroDivisionError, IntegrationError):
            return None
        if not (abs(step) < pad):
            return None
        z -= step
        if abs(step) <= 1e-13 * (1.0 + abs(z)):
            break
    if not (x0 - 0.05 * resolution <= z.real <= x1 + 0.05 * resolution):
        return None
    if not (y0 - 0.05 * resolution <= z.imag <= y1 + 0.05 * resolution):
        return None
    return z


def locate_zeros(f, window, resolution: float) -> ZeroSet:
    """All zeros of f in the window, quadtree-isolated and Newton-polished.

    Cells that still hold several zeros at the resolution floor are
    reported as one position with the summed multiplicity.  Counts are
    conserved at every subdivision level by construction.
    """
    if resolution <= 0:
        raise GeometryError("resolution must be positive")
    count, eff_window = _count_with_nudges(f, tuple(window), resolution)
    found = []

    def subdivide(rect, n, depth):
        if n == 0:
            return
        x0, x1, y0, y1 = rect
        size = max(x1 - x0, y1 - y0)
        if n == 1:
            z = _newton_polish(f, complex(0.5 * (x0 + x1), 0.5 * (y0 + y1)), rect, resolution)
            if z is not None:
                found.append((z, 1))
                return
            if size <= resolution:
                found.append((complex(0.5 * (x0 + x1), 0.5 * (y0 + y1)), 1))
                return
        elif size <= resolution:
            found.append((complex(0.5 * (x0 + x1), 0.5 * (y0 + y1)), n))
            return
        if depth > 60:
            raise GeometryError("quadtree depth exceeded")

        # split slightly off-center (symmetric zero patterns love to sit on
        # cell midlines), nudging the cross further when a zero is hit
        cx = x0 + 0.503791 * (x1 - x0)
        cy = y0 + 0.503791 * (y1 - y0)
        for attempt, (sx, sy) in enumerate(((0, 0),) + _NUDGE_STEPS):
            mx = cx + 0.37 * resolution * sx * max(1, attempt)
            my = cy + 0.37 * resolution * sy * max(1, attempt)
            if not (x0 < mx < x1 and y0 < my < y1):
                continue
            quads = [
                (x0, mx, y0, my),
                (mx, x1, y0, my),
                (x0, mx, my, y1),
                (mx, x1, my, y1),
            ]
            try:
                counts = [count_zeros_rect(f, qd) for qd in quads]
            except GeometryError:
                continue
            if sum(counts) == n:
                for qd, c in zip(quads, counts):
                    subdivide(qd, c, depth + 1)
                return
        raise GeometryError(
            f"child counts inconsistent after nudges in cell {rect} (n={n})"
        )

    subdivide(eff_window, count, 0)

    # merge positions closer than the resolution
    found.sort(key=lambda zm: (zm[0].real, zm[0].imag))
    merged = []
    for z, m in found:
        if merged and abs(z - merged[-1][0]) < resolution:
            zprev, mprev = merged[-1]
            w = (zprev * mprev + z * m) / (mprev + m)
            merged[-1] = (w, mprev + m)
        else:
            merged.append((z, m))
    merged.sort(key=lambda zm: (zm[0].real, zm[0].imag))
    return ZeroSet(zeros=tuple(merged), window=eff_window)


def empirical_measure(zs: ZeroSet, n: int) -> EmpiricalMeasure:
    """Counting measure of the zeros scaled by 1/n."""
    if n < 1:
        raise GeometryError("normalization index must be >= 1")
    return EmpiricalMeasure(zeroset=zs, n=n)


@dataclass(frozen=True)
class ArcComparison:
    arc_index: int
    ks_distance: Optional[float]
    empirical_mass: float
    limit_mass: float
    zero_count: int


@dataclass(frozen=True)
class ComparisonReport:
    """Empirical zero measure against the limit measure on E."""

    arcs: tuple
    near_fraction: float
    delta: float
    unassigned_mass: float

    def arc(self, index: int) -> ArcComparison:
        for a in self.arcs:
            if a.arc_index == index:
                return a
        raise KeyError(index)


def compare_to_limit(em: EmpiricalMeasure, sc, delta: float = 0.1) -> ComparisonReport:
    """Project zeros to the exceptional arcs and compare with the limit law.

    ``sc`` is the (rescaled) Stokes complex carrying the exceptional set.
    Returns per-arc Kolmogorov-Smirnov distances of the projected zeros
    against the limit arclength law, per-arc masses, and the fraction of
    zero mass within ``delta`` of E.
    """
    q = sc.quaddiff
    x0, x1, y0, y1 = em.zeroset.window
    arcs = []
    for arc_id, line_idx in enumerate(sc.exceptional_lines):
        samples = [complex(s) for s in sc.lines[line_idx].samples]
        clipped = [
            z
            for z in samples
            if x0 - 1e-9 <= z.real <= x1 + 1e-9 and y0 - 1e-9 <= z.imag <= y1 + 1e-9
        ]
        if len(clipped) >= 2:
            arcs.append((arc_id, clipped))

    assignments = {aid: [] for aid, _ in arcs}
    near_mass = 0.0
    total_mass = 0.0
    for z, m in em.atoms():
        total_mass += m
        best = None
        for aid, pts in arcs:
            dist, s_pos, _ = nearest_on_polyline(z, pts)
            if best is None or dist < best[0]:
                best = (dist, aid, s_pos)
        tp_dist = min(abs(z - v) for v in sc.turning_points)
        if best is not None and min(best[0], tp_dist) <= delta:
            near_mass += m
        if best is not None and best[0] <= delta:
            assignments[best[1]].append((best[2], m))

    out = []
    assigned_mass = 0.0
    for aid, pts in arcs:
        s_grid, cum = arc_mass_profile(q, pts)
        limit_mass = float(cum[-1])
        atoms = sorted(assignments[aid])
        emp_mass = sum(m for _, m in atoms)
        assigned_mass += emp_mass
        ks = None
        if atoms and limit_mass > 0:
            wsum = emp_mass
            ks = 0.0
            acc = 0.0
            for s_pos, m in atoms:
                flim = float(np.interp(s_pos, s_grid, cum)) / limit_mass
                ks = max(ks, abs(flim - acc / wsum), abs(flim - (acc + m) / wsum))
                acc += m
        out.append(
            ArcComparison(
                arc_index=aid,
                ks_distance=ks,
                empirical_mass=emp_mass,
                limit_mass=limit_mass,
                zero_count=round(emp_mass * em.n),
            )
        )
    return ComparisonReport(
        arcs=tuple(out),
        near_fraction=(near_mass / total_mass) if total_mass else 1.0,
        delta=delta,
        unassigned_mass=total_mass - assigned_mass,
    )


def hille_disc_check(zs: ZeroSet, r: float, imag_tol: float = 1e-8) -> bool:
    """True when every zero inside |z| <= r is real to within imag_tol."""
    if not 0 < r < 1:
        raise GeometryError("the disc radius must lie in (0, 1)")
    return all(abs(z.imag) <= imag_tol for z, _ in zs.zeros if abs(z) <= r)
