"""Coefficient containers for functions on [-1, 1] and on the sphere.

Spherical harmonics follow the convention

    Y_l^m(phi, theta) = sqrt(2l+1) sqrt((l-m)!/(l+m)!) P_l^m(cos phi) e^{i m theta}

with the Condon-Shortley phase, so ``Y_0^0 = 1``, ``Y_l^0 = sqrt(2l+1) P_l`` and
the harmonics are orthonormal for the sphere average ``(1/4pi) int dS``.
Points on the sphere are addressed by ``z = cos(phi)`` and the azimuth
``theta``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import legendre as npleg
from scipy.special import sph_harm_y

from .errors import DomainError

__all__ = ["LegendreCoeffs", "HarmonicCoeffs", "sphere_grid", "harmonic"]

_SQRT_4PI = float(np.sqrt(4 * np.pi))


@dataclass(frozen=True)
class LegendreCoeffs:
    """``f(z) = sum_l a[l] P_l(z)``; ``exact`` optionally mirrors ``a`` exactly."""

    a: np.ndarray
    exact: tuple | None = None

    def __post_init__(self) -> None:
        arr = np.atleast_1d(np.asarray(self.a))
        if arr.ndim != 1:
            raise DomainError("Legendre coefficients must be a vector")
        object.__setattr__(self, "a", arr)

    def __len__(self) -> int:
        return self.a.size

    @property
    def degree(self) -> int:
        return self.a.size - 1

    def __call__(self, z):
        return npleg.legval(z, self.a)

    def integral(self) -> float:
        """``int_{-1}^{1} f dz``, which is just ``2 a_0``."""
        return 2 * self.a[0] if self.a.size else 0.0

    def norm_sq(self) -> float:
        """``(1/2) int |f|^2 dz = sum |a_l|^2 / (2l+1)``."""
        ls = np.arange(self.a.size)
        return float(np.sum(np.abs(self.a) ** 2 / (2 * ls + 1)))

    def reflected(self) -> "LegendreCoeffs":
        """Coefficients of ``z -> f(-z)``."""
        signs = np.where(np.arange(self.a.size) % 2 == 1, -1, 1)
        exact = None
        if self.exact is not None:
            exact = tuple(-v if i % 2 else v for i, v in enumerate(self.exact))
        return LegendreCoeffs(self.a * signs, exact)

    def to_harmonic(self, n: int | None = None) -> "HarmonicCoeffs":
        """The same function seen on the sphere (independent of the azimuth)."""
        n = self.degree if n is None else n
        h = HarmonicCoeffs.zeros(n)
        ls = np.arange(min(n, self.degree) + 1)
        h.a[ls, n] = self.a[ls] / np.sqrt(2 * ls + 1)
        return h


@dataclass
class HarmonicCoeffs:
    """``f = sum_{l<=n, |m|<=l} a_l^m Y_l^m`` stored as ``a[l, m + n]``."""

    n: int
    a: np.ndarray

    def __post_init__(self) -> None:
        self.a = np.asarray(self.a, dtype=complex)
        if self.a.shape != (self.n + 1, 2 * self.n + 1):
            raise DomainError(f"coefficient array must have shape {(self.n + 1, 2 * self.n + 1)}")

    @classmethod
    def zeros(cls, n: int) -> "HarmonicCoeffs":
        return cls(n, np.zeros((n + 1, 2 * n + 1), dtype=complex))

    @classmethod
    def from_dict(cls, n: int, coeffs: dict) -> "HarmonicCoeffs":
        h = cls.zeros(n)
        for (l, m), v in coeffs.items():
            h[l, m] = v
        return h

    def _index(self, l: int, m: int) -> tuple[int, int]:
        if not (0 <= l <= self.n and abs(m) <= l):
            raise DomainError(f"(l, m) = ({l}, {m}) outside level {self.n}")
        return l, m + self.n

    def __getitem__(self, lm: tuple[int, int]) -> complex:
        return complex(self.a[self._index(*lm)])

    def __setitem__(self, lm: tuple[int, int], value: complex) -> None:
        self.a[self._index(*lm)] = value

    def items(self):
        """Nonzero ``((l, m), value)`` pairs."""
        for l, col in zip(*np.nonzero(self.a)):
            yield (int(l), int(col) - self.n), complex(self.a[l, col])

    def copy(self) -> "HarmonicCoeffs":
        return HarmonicCoeffs(self.n, self.a.copy())

    def resized(self, n: int) -> "HarmonicCoeffs":
        """Truncate or zero-pad to level ``n``."""
        out = HarmonicCoeffs.zeros(n)
        top = min(n, self.n)
        for l in range(top + 1):
            out.a[l, n - l : n + l + 1] = self.a[l, self.n - l : self.n + l + 1]
        return out

    def conj(self) -> "HarmonicCoeffs":
        """Coefficients of the complex-conjugate function.

        ``conj(Y_l^m) = (-1)^m Y_l^{-m}``, hence ``b_l^m = (-1)^m conj(a_l^{-m})``.
        """
        ms = np.arange(-self.n, self.n + 1)
        signs = np.where(ms % 2 == 1, -1, 1)
        return HarmonicCoeffs(self.n, signs * np.conj(self.a[:, ::-1]))

    def is_real(self, tol: float = 1e-12) -> bool:
        return bool(np.max(np.abs(self.a - self.conj().a), initial=0.0) <= tol)

    @property
    def spherical_mean(self) -> complex:
        """``(1/4pi) int f dS`` = ``a_0^0``."""
        return complex(self.a[0, self.n])

    def legendre_part(self) -> LegendreCoeffs:
        """Azimuth-independent part as a Legendre series in ``z``."""
        ls = np.arange(self.n + 1)
        return LegendreCoeffs(self.a[:, self.n] * np.sqrt(2 * ls + 1))

    def __add__(self, other: "HarmonicCoeffs") -> "HarmonicCoeffs":
        n = max(self.n, other.n)
        return HarmonicCoeffs(n, self.resized(n).a + other.resized(n).a)

    def __sub__(self, other: "HarmonicCoeffs") -> "HarmonicCoeffs":
        n = max(self.n, other.n)
        return HarmonicCoeffs(n, self.resized(n).a - other.resized(n).a)

    def __mul__(self, scalar: complex) -> "HarmonicCoeffs":
        return HarmonicCoeffs(self.n, self.a * scalar)

    __rmul__ = __mul__

    def evaluate(self, z, theta, derivative: str | None = None) -> np.ndarray:
        """Values (or ``d/dz``, ``d/dtheta``) at points ``(z, theta)``.

        ``z`` and ``theta`` broadcast against each other.  ``d/dz`` is taken at
        fixed azimuth and is singular at the poles, so keep ``|z| < 1`` there.
        """
        z, theta = np.broadcast_arrays(np.asarray(z, float), np.asarray(theta, float))
        if np.any(np.abs(z) > 1):
            raise DomainError("z must lie in [-1, 1]")
        polar = np.arccos(z)
        theta = np.mod(theta, 2 * np.pi)
        out = np.zeros(z.shape, dtype=complex)
        for (l, m), coef in self.items():
            if derivative is None:
                y = sph_harm_y(l, m, polar, theta)
            elif derivative == "theta":
                y = 1j * m * sph_harm_y(l, m, polar, theta)
            elif derivative == "z":
                if np.any(np.abs(z) >= 1):
                    raise DomainError("d/dz is singular at the poles")
                _, grad = sph_harm_y(l, m, polar, theta, diff_n=1)
                y = -grad[..., 0] / np.sin(polar)
            else:
                raise DomainError(f"unknown derivative {derivative!r}")
            out += coef * _SQRT_4PI * y
        return out


def harmonic(n: int, l: int, m: int, value: complex = 1.0) -> HarmonicCoeffs:
    """The single harmonic ``value * Y_l^m`` at level ``n``."""
    h = HarmonicCoeffs.zeros(n)
    h[l, m] = value
    return h


def sphere_grid(nz: int = 64, ntheta: int = 64) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes in ``z`` times uniform azimuths.

    Returns ``(Z, THETA, weights)`` where the weights integrate the sphere
    average ``(1/4pi) int dS`` exactly for band-limited functions.
    """
    zs, wz = npleg.leggauss(nz)
    thetas = 2 * np.pi * np.arange(ntheta) / ntheta
    Z, TH = np.meshgrid(zs, thetas, indexing="ij")
    W = np.outer(wz / 2, np.full(ntheta, 1.0 / ntheta))
    return Z, TH, W
