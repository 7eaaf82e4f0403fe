"""
Twisted products and the ground-space picture
=============================================

The twisted product transports operator multiplication to symbols.  For a
Poisson-type family the commutator, rescaled by ``n``, approaches
``2i {f, g}``.  The second half follows operators acting on Fourier
polynomials as the spin grows.
"""

from spincorr import (
    AlternateSW,
    Exp,
    FourierState,
    StandardSW,
    StateSequence,
    convergence_diagnostics,
    j3_symbol,
    operator_action,
    poisson_diagnostic,
)

rep = poisson_diagnostic(1, 0, 1, 1, StandardSW(), [10, 20, 40, 80])
print(rep.to_csv())

# the alternate family satisfies the mirrored condition
anti = poisson_diagnostic(1, 0, 1, 1, AlternateSW(), [20, 80], sign=-1)
print("alternate SW residual (iii'):", anti.column("residual_iii"))

# J3 acts on u(j, m) as multiplication by m, exactly, at every spin
for j in (1, 3):
    st = FourierState.basis(j, 1, exact=True)
    out = operator_action(j3_symbol(2 * j, StandardSW(), exact=True), StandardSW(), st, exact=True)
    print(f"j={j}: J3 u(j,1) =", [str(out[m]) for m in range(-j, j + 1)])

# flat states keep unit norm while every coefficient tends to zero
d = convergence_diagnostics(StateSequence.flat(), [4, 8, 16, 32, 64])
print("flat sequence: cauchy", d["cauchy"].value, "norm-discontinuous", d["norm_discontinuous"])

img = StateSequence(lambda j: operator_action(Exp().series(2 * j).to_harmonic(2 * j), StandardSW(), FourierState.basis(j, 0)))
d = convergence_diagnostics(img, [4, 8, 16, 32])
print("e^z applied to u(j,0): distances", [f"{x:.2e}" for x in d["distances"]])
