import math
from fractions import Fraction

import numpy as np
import pytest

from spincorr.correspondence_catalog import Counterexample, Custom, StandardBerezin, StandardSW, Verdict, char_numbers
from spincorr.errors import DomainError, ResourceError, SingularityError
from spincorr.localization_lab import Exp, PiRule, PolyCoeffs, localization_record
from spincorr.quantization import (
    J3Operator,
    asymptotic_norm_report,
    classical_expectation,
    function_norm,
    normalized_norm,
    operator_norm,
    quantize,
)
from spincorr.symbol_calculus import inverse_symbol


def test_constant_quantizes_to_identity():
    F = quantize(StandardBerezin(), PolyCoeffs([1]), 8)
    assert np.allclose(F.diagonal(), 1)
    assert np.allclose(J3Operator.identity(8).diagonal(), 1)


@pytest.mark.parametrize("dual", [False, True])
def test_quantize_matches_inverse_symbol(dual):
    n = 10
    fam = StandardBerezin()
    c = char_numbers(fam, n)
    h = Exp().series(n).to_harmonic(n)
    dense = inverse_symbol(h, 1 / c if dual else c)
    F = quantize(fam, Exp(), n, dual=dual)
    assert np.allclose(F.matrix(), dense.real, atol=1e-12)
    assert F.is_hermitian
    assert operator_norm(F) == pytest.approx(np.max(np.abs(np.diag(dense))))


def test_quantized_symbol_round_trip():
    n = 6
    fam = StandardBerezin()
    F = quantize(fam, Exp(), n)
    assert np.allclose(F.symbol(char_numbers(fam, n)).a, Exp().legendre_coeffs(n))


def test_expectation_is_diagonal_entry():
    # <Pi_k | F~> is the k-th diagonal entry of the dual quantization
    n = 40
    fam = StandardBerezin()
    F = quantize(fam, Exp(), n, dual=True)
    for k in (1, 11, 41):
        rec = localization_record(fam, k, Exp(), n)
        assert F.diagonal()[k - 1] == pytest.approx(rec["integral"], rel=1e-12)


def test_counterexample_norm_formula():
    # ||F_n||^2 = sum_{l<n} |a_l|^2/(2l+1) + 2n + 1
    f = Exp()
    for n in (5, 20, 80):
        a = f.legendre_coeffs(n)
        ls = np.arange(n)
        expected = np.sum(a[:n] ** 2 / (2 * ls + 1)) + 2 * n + 1
        F = quantize(Counterexample(f, inverted=True), f, n)
        assert normalized_norm(F) ** 2 == pytest.approx(expected, rel=1e-12)


def test_exact_norms_for_sw():
    f = PolyCoeffs([Fraction(1, 2), 3, 0, Fraction(-2, 7)])
    F = quantize(StandardSW(), f, 5, exact=True)
    assert normalized_norm(F, exact=True) == function_norm(f, L=5, exact=True)
    assert normalized_norm(F) == pytest.approx(f.norm())


def test_exact_needs_rational_input():
    with pytest.raises(DomainError):
        quantize(StandardSW(), Exp(), 4, exact=True)


def test_vanishing_number_is_singular():
    with pytest.raises(SingularityError):
        quantize(Custom({3: [1, 1, 0, 1]}), Exp(), 3)


def test_diagonal_cap():
    F = J3Operator(3000, np.zeros(3001))
    with pytest.raises(ResourceError):
        F.diagonal()


def test_norm_reports():
    rep = asymptotic_norm_report(StandardSW(), Exp(), [16, 32, 64, 128])
    assert rep.verdict == "converges"
    assert rep.limit == pytest.approx(Exp().norm(), rel=1e-8)
    assert rep.to_csv().startswith("n,norm\n16,")
    assert rep.to_json()["verdict"] == "converges"
    bad = asymptotic_norm_report(Counterexample(Exp(), inverted=True), Exp(), [16, 32, 64, 128])
    assert bad.verdict == "unbounded"


def test_classical_expectation_report():
    rep = classical_expectation(StandardBerezin(), PiRule(0.5), Exp(), [250, 500, 1000, 2000])
    assert rep.verdict is Verdict.YES
    assert rep.limit == pytest.approx(1.0, abs=5e-3)
    assert rep.to_csv().splitlines()[0] == "n,k,expectation_re,expectation_im,target"
    with pytest.warns(UserWarning):
        classical_expectation(StandardBerezin(), PiRule(0.5), Exp(), [10, 20, 40], poisson=False)


def test_function_norm_paths():
    f = Exp()
    assert function_norm(f) == pytest.approx(math.sqrt(math.sinh(2) / 2))
    assert function_norm(f, L=30) == pytest.approx(function_norm(f), rel=1e-14)
    assert function_norm(f.series(30)) == pytest.approx(function_norm(f), rel=1e-14)
