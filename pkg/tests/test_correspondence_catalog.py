import json
from fractions import Fraction

import numpy as np
import pytest

from spincorr.correspondence_catalog import (
    AlternateBerezin,
    AlternateSW,
    AlternateToeplitz,
    Counterexample,
    Custom,
    DualOf,
    KernelWeights,
    KernelWeightsFamily,
    LowerMiddleState,
    StandardBerezin,
    StandardSW,
    StandardToeplitz,
    UpperMiddleState,
    Verdict,
    berezin_number,
    char_numbers,
    classify,
    counterexample_family,
    dual,
    family_from_spec,
    from_kernel_weights,
    weights_from_char_numbers,
)
from spincorr.errors import ConfigError, DomainError, SingularityError
from spincorr.exact_spin_algebra import ExactValue
from spincorr.localization_lab import Exp


def test_sw_numbers():
    assert np.all(StandardSW().values(9) == 1)
    assert np.array_equal(AlternateSW().values(4), [1, -1, 1, -1, 1])


def test_berezin_small_values():
    # b_l^2 = 2! sqrt(3) / sqrt((3+l)! (2-l)!)
    assert berezin_number(2, 1) == ExactValue.sqrt_of(Fraction(1, 2))
    assert berezin_number(2, 2) == ExactValue.sqrt_of(Fraction(1, 10))
    assert np.allclose(AlternateBerezin().values(2), [1, -(0.5**0.5), 0.1**0.5])


def test_toeplitz_is_dual_of_berezin():
    n = 30
    assert np.allclose(StandardToeplitz().values(n) * StandardBerezin().values(n), 1)
    assert np.allclose(AlternateToeplitz().values(n), dual(AlternateBerezin()).values(n))


def test_dual_is_an_involution():
    fam = StandardBerezin()
    assert dual(dual(fam)) is fam
    assert DualOf(fam).exact_values(3)[2] == 1 / berezin_number(3, 2)


def test_kernel_weights_round_trip():
    n = 12
    w = KernelWeights.uniform(n)
    c = from_kernel_weights(w)
    assert c.is_correspondence is False  # the uniform kernel kills every l >= 1
    rng = np.random.default_rng(0)
    a = rng.random(n + 1)
    a /= a.sum()
    c = from_kernel_weights(KernelWeights(n, tuple(a)))
    assert np.allclose(weights_from_char_numbers(c.values), a)


def test_berezin_kernel_is_first_projector():
    n = 20
    assert np.allclose(weights_from_char_numbers(StandardBerezin().values(n)), np.eye(n + 1)[0], atol=1e-12)
    assert np.allclose(weights_from_char_numbers(AlternateBerezin().values(n)), np.eye(n + 1)[n], atol=1e-12)


def test_kernel_weights_validation():
    with pytest.raises(DomainError):
        KernelWeights(2, (Fraction(1, 2), Fraction(1, 2), Fraction(1, 2)))
    with pytest.raises(DomainError):
        KernelWeights(2, (1,))


def test_exact_bound_checks():
    kc = from_kernel_weights(KernelWeights.projector(6, 3))
    assert kc.within_bound()
    assert not kc.is_isometric()


def test_middle_states():
    for n in (3, 4, 11):
        up, low = UpperMiddleState().values(n), LowerMiddleState().values(n)
        assert np.allclose(low, up * (-1.0) ** np.arange(n + 1))
        w = weights_from_char_numbers(up)
        assert np.all(w >= -1e-12)


def test_counterexample_diagonal():
    fam = Counterexample(Exp())
    n = 6
    a = Exp().legendre_coeffs(n)
    c = fam.values(n)
    assert np.allclose(c[:n], 1)
    assert c[n] == pytest.approx((2 * n + 1) / a[n])
    inv = Counterexample(Exp(), inverted=True).values(n)
    assert inv[n] == pytest.approx(a[n] / (2 * n + 1))
    assert np.allclose(Counterexample(Exp(), anti=True).values(n)[:n], (-1.0) ** np.arange(n))


def test_counterexample_rejects_vanishing_source():
    with pytest.raises(DomainError):
        counterexample_family([1.0, 0.0, 1.0])


def test_vanishing_numbers_raise():
    fam = Custom({3: [1, 1, 0, 1]})
    with pytest.raises(SingularityError):
        char_numbers(fam, 3)


def test_classify_known_families():
    sw = classify(StandardSW(), [4, 8, 16])
    assert sw.isometric is Verdict.YES
    assert sw.mapping_positive is Verdict.NO
    assert sw.poisson is Verdict.YES
    b = classify(StandardBerezin(), [100, 200, 400, 800], tol=0.05)
    assert b.mapping_positive is Verdict.YES
    assert b.isometric is Verdict.NO
    assert b.poisson is Verdict.YES
    assert classify(AlternateBerezin(), [100, 200, 400, 800], tol=0.05).anti_poisson is Verdict.YES
    assert classify(StandardToeplitz(), [4, 8, 16]).positive_dual is Verdict.YES
    payload = json.dumps(sw.to_json())
    assert '"isometric": true' in payload


def test_classify_rejects_bad_grid():
    with pytest.raises(ConfigError):
        classify(StandardSW(), [8, 4])


@pytest.mark.parametrize(
    "fam",
    [
        StandardSW(),
        AlternateBerezin(),
        StandardToeplitz(),
        UpperMiddleState(),
        LowerMiddleState(),
        DualOf(StandardBerezin()),
        KernelWeightsFamily("uniform"),
        Custom({2: [1, Fraction(1, 2), Fraction(1, 3)]}, StandardSW()),
        Counterexample(Exp(), anti=True),
    ],
    ids=lambda f: repr(f),
)
def test_spec_round_trip(fam):
    spec = fam.to_spec()
    back = family_from_spec(json.dumps(spec))
    n = 2
    assert np.allclose(back.values(n), fam.values(n))


def test_spec_shorthand_and_errors():
    assert isinstance(family_from_spec("berezin"), StandardBerezin)
    assert isinstance(family_from_spec("sw-alternate"), AlternateSW)
    with pytest.raises(ConfigError):
        family_from_spec("nonsense")
    with pytest.raises(ConfigError):
        family_from_spec({"kind": "warp"})
