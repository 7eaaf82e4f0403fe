"""
Where do projector symbols concentrate?
=======================================

The symbol of the projector onto the J3-eigenstate with eigenvalue ``m``
behaves, for large spin, like a probability density on ``[-1, 1]``.  For a
good correspondence it piles up at ``z0 = 2m/n``.  We test this by integrating
a smooth function against it and comparing with the point value.
"""

import math

from spincorr import (
    AlternateBerezin,
    Exp,
    PiRule,
    StandardBerezin,
    StandardSW,
    StandardToeplitz,
    RungePole,
    counterexample_family,
    localization_sweep,
    moments,
)

grid = [125, 250, 500, 1000, 2000]

# Berezin is mapping-positive, so mean and variance tell the whole story:
# the mean drifts to z0 and the variance dies like 1/n.
for n in (10, 100, 1000):
    mu, s2 = moments(n, n // 4 + 1, StandardBerezin())
    print(f"n={n:5d}  mean={mu:.5f}  variance={s2:.2e}")

# The same statement, tested on f = e^z at three points.
for r in (0.0, 0.25, 0.5):
    sw = localization_sweep(StandardBerezin(), PiRule(r), Exp(), grid)
    print(f"Berezin r={r:<5} errors:", " ".join(f"{e:.2e}" for e in sw.errors))

# The alternate family localizes at the mirror point 2r - 1.
sw = localization_sweep(AlternateBerezin(), PiRule(0.25), Exp(), grid, anti=True)
print("alternate Berezin, target e^(-1/2):", f"{sw.rows[-1]['integral']:.6f} vs {math.exp(-0.5):.6f}")

# Stratonovich-Weyl is not positive, but it localizes all the same.
sw = localization_sweep(StandardSW(), PiRule(0.25), Exp(), grid)
print("SW errors:", " ".join(f"{e:.2e}" for e in sw.errors))

# Toeplitz numbers grow exponentially; analytic functions with a distant
# enough pole still localize.
sw = localization_sweep(StandardToeplitz(), PiRule(0.2), RungePole(3.0), [100, 200, 400, 800, 1600])
print("Toeplitz, 1/(3-z):", " ".join(f"{e:.2e}" for e in sw.errors))

# A Poisson-type family rigged on its top number: the error grows like
# 2n / (pi n)^(1/4) at the equator.
fam = counterexample_family(Exp())
sw = localization_sweep(fam, PiRule(0.5, "centered"), Exp(), [100, 400, 1600])
for row in sw.rows:
    n = row["n"]
    print(f"counterexample n={n:5d}  error={row['error']:.1f}  ratio={row['error'] / (2 * n / (math.pi * n) ** 0.25):.3f}")
