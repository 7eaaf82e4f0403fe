from fractions import Fraction

import numpy as np
import pytest

from spincorr.correspondence_catalog import Counterexample, StandardBerezin, StandardSW, Verdict
from spincorr.errors import DomainError
from spincorr.exact_spin_algebra import ExactValue
from spincorr.ground_space import (
    FourierState,
    StateSequence,
    convergence_diagnostics,
    j3_symbol,
    modified_norm_sq,
    nest,
    nested_distance,
    operator_action,
    upper_bounded_check,
)
from spincorr.localization_lab import Exp

F = {(1, 0): Fraction(1, 3), (2, 1): Fraction(2, 5), (2, -1): Fraction(-2, 5), (3, -2): Fraction(1, 7)}


def test_nesting_is_isometric_and_composes():
    rng = np.random.default_rng(0)
    st = FourierState(2, rng.normal(size=5) + 1j * rng.normal(size=5))
    assert nest(st, 6).norm() == pytest.approx(st.norm())
    assert np.array_equal(nest(nest(st, 4), 7).alpha, nest(st, 7).alpha)
    assert nested_distance(st, nest(st, 5)) == 0
    with pytest.raises(DomainError):
        nest(st, 1)


def test_half_integer_spins_are_rejected():
    with pytest.raises(DomainError):
        FourierState.zero(Fraction(3, 2))


def test_identity_acts_trivially():
    rng = np.random.default_rng(1)
    st = FourierState(3, rng.normal(size=7) + 1j * rng.normal(size=7))
    out = operator_action({(0, 0): 1}, StandardBerezin(), st)
    assert np.allclose(out.alpha, st.alpha)


@pytest.mark.parametrize("family", [StandardSW(), StandardBerezin()], ids=["sw", "berezin"])
@pytest.mark.parametrize("dual", [False, True])
def test_exact_and_matrix_routes_agree(family, dual):
    for j in (1, 2, 3):
        for m in range(-j, j + 1):
            fl = operator_action(F, family, FourierState.basis(j, m), dual=dual).alpha
            ex = operator_action(F, family, FourierState.basis(j, m, exact=True), dual=dual, exact=True).alpha
            assert np.allclose(fl, [float(x) for x in ex], atol=1e-13)


def test_j3_rigidity_survives_nesting():
    fam = StandardBerezin()
    for j in (1, 2, 4):
        for m in range(-j, j + 1):
            small = operator_action(j3_symbol(2 * j, fam, exact=True), fam, FourierState.basis(j, m, exact=True), exact=True)
            big = operator_action(
                j3_symbol(2 * (j + 3), fam, exact=True), fam, nest(FourierState.basis(j, m, exact=True), j + 3), exact=True
            )
            assert list(nest(small, j + 3).alpha) == list(big.alpha)
            assert small[m] == ExactValue.from_rational(m)


def test_constant_sequences_are_cauchy():
    st = FourierState(2, [0.1, 0.5, 1, 0.5, 0.1])
    d = convergence_diagnostics(StateSequence.constant(st), [2, 4, 8, 16])
    assert d["cauchy"] is Verdict.YES
    assert not d["norm_discontinuous"]
    assert d["limits"][0] == pytest.approx(1)


def test_flat_sequence_loses_its_norm():
    d = convergence_diagnostics(StateSequence.flat(), [4, 8, 16, 32, 64])
    assert d["cauchy"] is Verdict.NO
    assert d["norm_discontinuous"]
    assert d["norms"][-1] == pytest.approx(1)
    assert d["tannery_gap"] > 0.5


def test_modified_norm_of_basis_state():
    # (j!)^2 / ((j-m)!(j+m)!) for u(j, m)
    assert modified_norm_sq(FourierState.basis(3, 1)) == pytest.approx(36 / (2 * 24))


def test_upper_bounded_check_verdicts():
    grid = [32, 64, 128, 256, 512]
    assert upper_bounded_check(StandardSW(), Exp(), grid) is Verdict.YES
    assert upper_bounded_check(Counterexample(Exp(), inverted=True), Exp(), grid) is Verdict.NO


def test_state_csv():
    text = FourierState.basis(1, 0, exact=True).to_csv()
    assert text.splitlines() == ["j,m,re_alpha,im_alpha", "1,-1,0,0", "1,0,1,0", "1,1,0,0"]
