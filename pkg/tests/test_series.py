import numpy as np
import pytest

from spincorr.errors import DomainError
from spincorr.series import HarmonicCoeffs, LegendreCoeffs, harmonic


def test_legendre_coeffs_basics():
    f = LegendreCoeffs(np.array([1.0, 2.0, 3.0]))
    assert f(1.0) == pytest.approx(6.0)
    assert f.integral() == 2.0
    assert f.norm_sq() == pytest.approx(1 + 4 / 3 + 9 / 5)
    assert f.reflected()(0.3) == pytest.approx(f(-0.3))


def test_low_harmonics_closed_forms():
    z = np.array([-0.4, 0.2, 0.9])
    th = np.array([0.3, 1.7, 5.0])
    assert np.allclose(harmonic(2, 0, 0).evaluate(z, th), 1)
    assert np.allclose(harmonic(2, 1, 0).evaluate(z, th), np.sqrt(3) * z)
    # Condon-Shortley: Y_1^1 = -sqrt(3/2) sin(phi) e^{i theta}
    ref = -np.sqrt(1.5) * np.sqrt(1 - z**2) * np.exp(1j * th)
    assert np.allclose(harmonic(2, 1, 1).evaluate(z, th), ref)


def test_derivatives():
    h = harmonic(3, 2, 1) + harmonic(3, 1, 0, 0.5)
    z, th, eps = 0.35, 1.2, 1e-6
    dz = (h.evaluate(z + eps, th) - h.evaluate(z - eps, th)) / (2 * eps)
    dt = (h.evaluate(z, th + eps) - h.evaluate(z, th - eps)) / (2 * eps)
    assert h.evaluate(z, th, "z") == pytest.approx(dz, abs=1e-7)
    assert h.evaluate(z, th, "theta") == pytest.approx(dt, abs=1e-7)
    with pytest.raises(DomainError):
        h.evaluate(1.0, 0.0, "z")


def test_conjugation_and_reality():
    h = harmonic(2, 1, 1) - harmonic(2, 1, -1)  # -sqrt(6) sin(phi) cos(theta), real
    assert h.is_real()
    z, th = 0.3, 0.8
    g = harmonic(2, 2, 1, 1 + 2j)
    assert g.conj().evaluate(z, th) == pytest.approx(np.conj(g.evaluate(z, th)))


def test_harmonic_container_ops():
    h = HarmonicCoeffs.from_dict(2, {(1, 0): 2.0, (2, -1): 1j})
    assert dict(h.items()) == {(1, 0): 2.0, (2, -1): 1j}
    assert h.resized(4)[2, -1] == 1j
    assert (h * 2)[1, 0] == 4.0
    assert h.legendre_part().a[1] == pytest.approx(2 * np.sqrt(3))
    assert LegendreCoeffs(np.array([0.0, 1.0])).to_harmonic(2)[1, 0] == pytest.approx(1 / np.sqrt(3))
    with pytest.raises(DomainError):
        h[3, 0] = 1
