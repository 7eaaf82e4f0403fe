"""Acceptance suite: one test per criterion (see the summary section of the run)."""

import math
import random
from fractions import Fraction

import numpy as np
import pytest

from spincorr import (
    AlternateBerezin,
    AlternateSW,
    Counterexample,
    Exp,
    FourierState,
    KernelWeights,
    LegendreCoeffs,
    PiRule,
    Reflected,
    StandardBerezin,
    StandardSW,
    StandardToeplitz,
    StateSequence,
    Verdict,
    asymptotic_norm_report,
    bound_check,
    cgc_matrix,
    classical_expectation,
    convergence_diagnostics,
    counterexample_family,
    from_kernel_weights,
    function_norm,
    j3_symbol,
    localization_record,
    localization_sweep,
    moments,
    moments_exact,
    mu_analytic_suite,
    nest,
    normalized_norm,
    operator_action,
    poisson_diagnostic,
    projector_symbol,
    quantize,
    rho_legendre_moments,
    toeplitz_diagonal_ratio,
    upper_bounded_check,
    edmonds_check,
)
from spincorr.correspondence_catalog import (
    AlternateToeplitz,
    DualOf,
    KernelWeightsFamily,
    LowerMiddleState,
    UpperMiddleState,
)
from spincorr.exact_spin_algebra import ExactValue

from .oracles import ladder_cg_table

GRID = [125, 250, 500, 1000, 2000]


def _decreasing(xs):
    return all(b < a for a, b in zip(xs, xs[1:]))


# 1 -------------------------------------------------------------------------


def test_criterion_01_cg_matches_ladder_oracle():
    for n in range(0, 9):
        j = Fraction(n, 2)
        oracle = ladder_cg_table(j, j)
        ours = {
            (Fraction(J.value), Fraction(M.value), Fraction(m1.value), Fraction(m2.value)): v
            for (J, M, m1, m2), v in cgc_matrix(j, j).items()
        }
        assert set(ours) == set(oracle), n
        for key, (sign, square) in oracle.items():
            assert ours[key] == ExactValue(sign, square), (n, key)


# 2 -------------------------------------------------------------------------


def test_criterion_02_closed_forms():
    for n in range(1, 51):
        kc = from_kernel_weights(KernelWeights.projector(n, 1))
        for l in range(n + 1):
            closed = math.exp(
                math.lgamma(n + 1) + 0.5 * math.log(n + 1) - 0.5 * (math.lgamma(n + l + 2) + math.lgamma(n - l + 1))
            )
            assert abs(kc.values[l] - closed) <= 1e-12 * max(1.0, closed)

    rng = random.Random(7)
    fam = StandardBerezin()
    for _ in range(100):
        n = rng.randint(1, 100)
        k = rng.randint(1, n + 1)
        z = rng.uniform(-1, 1)
        sym = projector_symbol(n, k, fam)
        closed = math.comb(n, k - 1) * (1 + z) ** (n - k + 1) * (1 - z) ** (k - 1) / 2**n
        assert abs(sym(z) - closed) <= 1e-10


# 3 -------------------------------------------------------------------------

CATALOG = [
    StandardSW(),
    AlternateSW(),
    StandardBerezin(),
    AlternateBerezin(),
    StandardToeplitz(),
    AlternateToeplitz(),
    UpperMiddleState(),
    LowerMiddleState(),
    KernelWeightsFamily("uniform"),
    DualOf(StandardBerezin()),
    Counterexample(Exp()),
]


def test_criterion_03_moments():
    for fam in CATALOG:
        for n in (1, 2, 3, 7, 40, 201, 500):
            for k in sorted({1, 2, n // 3 + 1, n // 2 + 1, n, n + 1}):
                m = rho_legendre_moments(n, k, fam, L=2, mode="float")
                second = m[0] / 3 + (2 * m[2] / 3 if n >= 2 else 0.0)
                spec_mu, spec_s2 = m[1], second - m[1] ** 2
                mu, s2 = moments(n, k, fam)
                scale = max(1.0, abs(mu), abs(s2), abs(spec_s2))
                assert abs(mu - spec_mu) <= 1e-11 * scale, (fam, n, k)
                assert abs(s2 - spec_s2) <= 1e-11 * scale, (fam, n, k)
    mu, s2 = moments_exact(2, 1, StandardBerezin())
    assert mu.to_fraction() == Fraction(1, 2)
    assert s2.to_fraction() == Fraction(3, 20)


# 4 -------------------------------------------------------------------------


@pytest.mark.parametrize("l, r", [(1, 0.0), (2, 0.5), (3, 1 / 3), (5, 0.8)])
def test_criterion_04_edmonds(l, r):
    sw = edmonds_check(l, PiRule(r), [100, 3000], mode="float")
    e100, e3000 = sw.errors
    assert e3000 < 1e-2
    assert e3000 < e100


# 5 -------------------------------------------------------------------------


@pytest.mark.parametrize("r", [0.0, 0.25, 0.5])
def test_criterion_05_berezin_localizes(r):
    sw = localization_sweep(StandardBerezin(), PiRule(r), Exp(), GRID)
    assert sw.errors[-1] < 5e-3
    assert _decreasing(sw.errors[-3:])


# 6 -------------------------------------------------------------------------


@pytest.mark.parametrize("r", [0.0, 0.25, 0.5])
def test_criterion_06_anti_localization_mirror(r):
    rule = PiRule(r)
    alt = localization_sweep(AlternateBerezin(), rule, Exp(), GRID, anti=True)
    assert alt.errors[-1] < 5e-3
    assert _decreasing(alt.errors[-3:])
    assert all(abs(row["z0"] - (2 * r - 1)) < 1e-15 for row in alt.rows)
    # same profile as the standard family tested on the mirrored function
    std = localization_sweep(StandardBerezin(), rule, Reflected(Exp()), GRID)
    assert np.allclose(alt.errors, std.errors, rtol=1e-12, atol=1e-15)


def test_criterion_06_reflection_exact():
    for n in (1, 2, 5, 17, 64, 200):
        for k in sorted({1, n // 2 + 1, n + 1}):
            a = projector_symbol(n, k, AlternateBerezin(), exact=True)
            b = projector_symbol(n, k, StandardBerezin(), exact=True).reflected()
            assert a.exact == b.exact
            kr = n + 2 - k
            c = projector_symbol(n, kr, StandardBerezin(), exact=True).reflected()
            assert projector_symbol(n, k, StandardBerezin(), exact=True).exact == c.exact


# 7 -------------------------------------------------------------------------


def test_criterion_07_counterexample_growth():
    fam = counterexample_family(Exp())
    rule = PiRule(0.5, "centered")
    grid = [100, 200, 400, 800, 1600, 2000]
    errors = [localization_record(fam, rule, Exp(), n)["error"] for n in grid]
    assert _decreasing(errors[::-1])
    for n, e in zip(grid, errors):
        ratio = e / (2 * n / (math.pi * n) ** 0.25)
        assert 0.5 <= ratio <= 2.0, (n, ratio)


# 8 -------------------------------------------------------------------------


def test_criterion_08_toeplitz():
    assert 0.98 <= toeplitz_diagonal_ratio(200) <= 1.02
    _, lg = StandardToeplitz().log_values(200, [200])
    scale = (200 + 0.5) * math.log(2) - 0.25 * math.log(200 * math.pi)
    assert 0.98 <= math.exp(lg[0] - scale) <= 1.02
    report = bound_check(StandardToeplitz(), 2, 120)
    assert not report.holds  # no polynomial bound for the Toeplitz numbers
    for r in (0.2, 0.5):
        res = mu_analytic_suite(StandardToeplitz(), 3 + math.sqrt(8), PiRule(r), [100, 200, 400, 800, 1600], poles=[3.0])
        assert res["poles"][0]["decreasing"], r


# 9 -------------------------------------------------------------------------


def _rational_series(deg, seed):
    rng = random.Random(seed)
    ex = tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(deg + 1))
    return LegendreCoeffs(np.array([float(x) for x in ex]), ex)


def test_criterion_09_norms():
    f = _rational_series(100, 3)
    for n in (1, 2, 3, 10, 37, 100):
        F = quantize(StandardSW(), f, n, exact=True)
        assert normalized_norm(F, exact=True) == function_norm(f, L=n, exact=True)

    Fd = quantize(StandardBerezin(), Exp(), 2000, dual=True)
    assert abs(normalized_norm(Fd) - Exp().norm()) < 1e-3

    rep = asymptotic_norm_report(Counterexample(Exp(), inverted=True), Exp(), GRID)
    vals = [v for _, v in rep.values]
    assert all(b - a > 1 for a, b in zip(vals, vals[1:]))
    assert rep.verdict == "unbounded"


# 10 ------------------------------------------------------------------------


@pytest.mark.parametrize("family", [StandardSW(), StandardBerezin()], ids=["sw", "berezin"])
@pytest.mark.parametrize("r", [0.0, 0.25, 0.5])
def test_criterion_10_expectation(family, r):
    rule = PiRule(r)
    rep = classical_expectation(family, rule, Exp(), GRID)
    assert rep.verdict is Verdict.YES
    assert abs(rep.limit - math.exp(rule.z0)) < 5e-3


def test_criterion_10_counterexample_not_cauchy():
    rep = classical_expectation(counterexample_family(Exp()), PiRule(0.5, "centered"), Exp(), GRID)
    assert rep.verdict is Verdict.NO


# 11 ------------------------------------------------------------------------

PAIRS = [(1, 0, 1, 1), (1, 1, 2, -1), (2, 0, 2, 1)]


@pytest.mark.parametrize("pair", PAIRS, ids=["l1-l1", "l1-l2", "l2-l2"])
def test_criterion_11_poisson_residuals(pair):
    rep = poisson_diagnostic(*pair, StandardSW(), [20, 80])
    for name in ("residual_i", "residual_ii", "residual_iii"):
        r20, r80 = rep.column(name)
        assert r80 < 0.5 * r20, (name, r20, r80)


def test_criterion_11_alternate_sign():
    anti = poisson_diagnostic(1, 0, 1, 1, AlternateSW(), [20, 80], sign=-1)
    r20, r80 = anti.column("residual_iii")
    assert r80 < 0.5 * r20
    wrong = poisson_diagnostic(1, 0, 1, 1, AlternateSW(), [80], sign=1)
    assert wrong.column("residual_iii")[0] > 1.0


# 12 ------------------------------------------------------------------------


def test_criterion_12_splitting():
    rng = random.Random(12)
    for n in (4, 10, 24):
        for _ in range(500):
            ints = [rng.randint(0, 20) for _ in range(n + 1)]
            if not any(ints):
                ints[0] = 1
            total = sum(ints)
            kc = from_kernel_weights(KernelWeights(n, tuple(Fraction(i, total) for i in ints)))
            assert kc.within_bound()
            assert not kc.is_isometric()


# 13 ------------------------------------------------------------------------


def test_criterion_13_ground_space():
    rng = random.Random(13)
    alpha = [ExactValue.from_rational(Fraction(rng.randint(-5, 5), rng.randint(1, 5))) for _ in range(7)]
    st = FourierState(3, np.array(alpha, dtype=object))
    for jj in (3, 4, 9):
        assert nest(st, jj).norm_sq_exact() == st.norm_sq_exact()

    for fam in (StandardSW(), StandardBerezin()):
        for j in (1, 2, 3):
            sym = j3_symbol(2 * j, fam, exact=True)
            for m in range(-j, j + 1):
                out = operator_action(sym, fam, FourierState.basis(j, m, exact=True), exact=True)
                want = [ExactValue.from_rational(m if mm == m else 0) for mm in range(-j, j + 1)]
                assert [out[mm] for mm in range(-j, j + 1)] == want

    diag = convergence_diagnostics(StateSequence.flat(), [4, 8, 16, 32, 64])
    assert diag["norm_discontinuous"]
    assert diag["cauchy"] is Verdict.NO

    assert upper_bounded_check(StandardSW(), Exp(), GRID) is Verdict.YES
    assert upper_bounded_check(StandardBerezin(), Exp(), GRID, dual=True) is Verdict.YES
    assert upper_bounded_check(Counterexample(Exp(), inverted=True), Exp(), GRID) is Verdict.NO
