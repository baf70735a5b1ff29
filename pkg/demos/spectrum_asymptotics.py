"""Shooting spectra against closed forms and the growth law.

The harmonic family has the exact spectrum 2n+1, which calibrates the
solver; the quartic and the PT cubic then show the eigenvalue ratio
lambda_n / (c n)^{2d/(d+2)} drifting to 1 as n grows.
"""

from stokeszeros.spectral import ProblemSpec, solve_eigenpair
from stokeszeros.wkb import growth_constant

print("harmonic oscillator (d=2, l=1): lambda_n vs 2n+1")
spec = ProblemSpec(2, 1)
for n in range(6):
    lam = solve_eigenpair(spec, n).lam
    print(f"  n={n}: {lam.real:.12f}   error {abs(lam - (2 * n + 1)):.2e}")

for d, ell, label in ((4, 2, "self-adjoint quartic"), (3, 1, "PT cubic")):
    spec = ProblemSpec(d, ell)
    c = growth_constant(d, ell)
    expo = 2.0 * d / (d + 2.0)
    print(f"\n{label} (d={d}, l={ell}), growth constant c = {c:.7f}")
    print(f"  {'n':>3} {'Re lambda':>16} {'Im lambda':>11} {'ratio':>9}")
    for n in (1, 5, 10, 20, 40):
        pair = solve_eigenpair(spec, n)
        ratio = abs(pair.lam) / (c * n) ** expo
        print(
            f"  {n:>3} {pair.lam.real:>16.8f} {pair.lam.imag:>11.2e} {ratio:>9.5f}"
        )
    print("  the ratio column approaches 1 like 1 + O(1/n)")
