"""Convergence of (1/h) log |Y_n| to the subharmonic envelope u.

Away from the exceptional set the rescaled eigenfunctions settle onto the
envelope u(z) = Re int_0^z sqrt(Q); the table shows the sup deviation over
a handful of off-support points shrinking as n grows.
"""

from stokeszeros.spectral import (
    EigenfunctionEvaluator,
    ProblemSpec,
    envelope_deviation,
    rescale,
    solve_eigenpair,
)
from stokeszeros.stokescomplex import stokes_complex
from stokeszeros.wkb import PhaseIntegral

CASES = {
    (2, 1): [2.0, 1.5j, 0.7 + 1.5j, -2.0],
    (4, 2): [1.5, -1.5, 0.9 + 0.9j, 0.5 - 1.2j],
}

for (d, ell), pts in CASES.items():
    spec = ProblemSpec(d, ell)
    phase = PhaseIntegral(stokes_complex(d, ell))
    print(f"\n(d,l) = ({d},{ell}); test points: {pts}")
    print("  u values:", [round(phase.u(complex(p)), 5) for p in pts])
    for n in (10, 20, 40):
        resc = rescale(EigenfunctionEvaluator(solve_eigenpair(spec, n)))
        dev = envelope_deviation(resc, phase, pts)
        sample = resc.log_modulus(pts[0])
        print(
            f"  n={n:>3}: (1/h) log|Y({pts[0]})| = {sample:+.5f}   "
            f"sup deviation from u = {dev:.5f}"
        )
