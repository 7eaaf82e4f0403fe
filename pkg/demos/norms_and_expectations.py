"""
Quantizing J3-invariant functions
=================================

Inverting a correspondence turns a function of ``z`` into a diagonal
operator.  Here we compare operator norms with function norms, and read the
classical expectation off the diagonal.
"""

from fractions import Fraction

from spincorr import (
    Counterexample,
    Exp,
    PiRule,
    PolyCoeffs,
    StandardBerezin,
    StandardSW,
    asymptotic_norm_report,
    classical_expectation,
    function_norm,
    normalized_norm,
    quantize,
)

# Stratonovich-Weyl is an isometry, exactly.
f = PolyCoeffs([Fraction(1, 2), 3, 0, Fraction(-2, 7)])
F = quantize(StandardSW(), f, 9, exact=True)
print("SW:", normalized_norm(F, exact=True), "==", function_norm(f, L=9, exact=True))

# The dual Berezin (Toeplitz-like) quantization approaches the L2 norm.
rep = asymptotic_norm_report(StandardBerezin(), Exp(), [125, 250, 500, 1000, 2000], dual=True)
print("dual Berezin:", rep.verdict, [f"{v:.6f}" for _, v in rep.values], "target", f"{rep.target:.6f}")

# The inverted counterexample blows up: ||F_n||^2 ~ 2n + 1.
rep = asymptotic_norm_report(Counterexample(Exp(), inverted=True), Exp(), [125, 250, 500, 1000, 2000])
print("inverted counterexample:", rep.verdict, [f"{v:.1f}" for _, v in rep.values])

# Classical expectations <Pi_k | F~> follow f(z0) when the family localizes.
for r in (0.0, 0.5):
    rep = classical_expectation(StandardBerezin(), PiRule(r), Exp(), [250, 500, 1000, 2000])
    print(f"expectation r={r}: {rep.verdict.value}, limit {rep.limit:.5f} vs {rep.target:.5f}")
