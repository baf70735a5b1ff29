"""Zero cloud of a PT-symmetric quartic eigenfunction over the exceptional set.

The rescaled zeros line up along the short line joining the two
boundary-region turning points and along the two unbounded exceptional
lines climbing toward the positive imaginary axis; per-arc masses match
the limit law (c/pi) sqrt(|Q|) |dz|.
"""

from pathlib import Path

from stokeszeros.render import render_zeros_svg
from stokeszeros.spectral import EigenfunctionEvaluator, ProblemSpec, rescale, solve_eigenpair
from stokeszeros.stokescomplex import stokes_complex
from stokeszeros.zeros import compare_to_limit, empirical_measure, locate_zeros

OUT = Path(__file__).resolve().parent / "out"
OUT.mkdir(exist_ok=True)

N = 24  # moderate index keeps this demo at about a minute
spec = ProblemSpec(4, 1)
sc = stokes_complex(4, 1)
pair = solve_eigenpair(spec, N)
print(f"PT quartic (4,1), n={N}: lambda = {pair.lam:.8f}")

resc = rescale(EigenfunctionEvaluator(pair))
window = (-1.6, 1.6, -1.6, 1.6)
zs = locate_zeros(resc, window, resolution=0.02)
rep = compare_to_limit(empirical_measure(zs, N), sc, delta=0.1)

print(f"zeros in the window: {zs.total_count}")
print(f"fraction within 0.1 of the exceptional set: {rep.near_fraction:.3f}")
for arc in rep.arcs:
    print(
        f"  arc {arc.arc_index}: {arc.zero_count} zeros, empirical mass "
        f"{arc.empirical_mass:.3f} vs limit {arc.limit_mass:.3f}"
        + (f", KS {arc.ks_distance:.3f}" if arc.ks_distance is not None else "")
    )

path = OUT / f"pt_quartic_zeros_n{N}.svg"
path.write_text(render_zeros_svg(sc, list(zs.zeros), window))
print(f"\ncloud rendered to {path}")
