"""Nested Fourier model of the spin spaces (integer j) and its ground limit.

A state at spin ``j`` is the vector of modified Fourier coefficients
``alpha_m``, ``-j <= m <= j``; the standard basis ``u(j, m)`` is the unit
vector at ``m`` and the inner product is plain ``l2``.  Nesting sends
``u(j, m)`` to ``u(j', m)``, i.e. pads with zeros on both sides, which is an
isometry.  Operators act through their matrix in the standard basis, so a
quantized function acts by

    beta_m = sqrt(n+1) sum_{l, m'} (<Y_l^{m-m'}|f> / c_l) C^{j j l}_{m, -m', m-m'} (-1)^(j-m') alpha_m'.

Only integer ``j`` is supported; the half-integer variant needs a different
identification of the constant function and is not implemented.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .correspondence_catalog import CharFamily, Verdict, char_numbers
from .errors import DomainError
from .exact_spin_algebra import ExactValue, cgc
from .quantization import asymptotic_norm_report
from .series import HarmonicCoeffs
from .symbol_calculus import inverse_symbol

__all__ = [
    "FourierState",
    "StateSequence",
    "nest",
    "nested_distance",
    "operator_action",
    "j3_symbol",
    "modified_norm_sq",
    "convergence_diagnostics",
    "upper_bounded_check",
]


def _check_j(j) -> int:
    if isinstance(j, Fraction) and j.denominator != 1:
        raise DomainError("only integer spins are supported by the Fourier model")
    if isinstance(j, float) and not j.is_integer():
        raise DomainError("only integer spins are supported by the Fourier model")
    j = int(j)
    if j < 0:
        raise DomainError("spin must be nonnegative")
    return j


@dataclass(frozen=True)
class FourierState:
    """Coefficients ``alpha[m + j]`` for ``m = -j..j``.

    ``alpha`` is a complex array, or an object array of exact numbers
    (``Fraction`` / ``ExactValue``) for exact bookkeeping.
    """

    j: int
    alpha: np.ndarray

    def __post_init__(self) -> None:
        j = _check_j(self.j)
        a = np.asarray(self.alpha)
        if a.dtype != object:
            a = a.astype(complex)
        if a.shape != (2 * j + 1,):
            raise DomainError(f"spin {j} needs {2 * j + 1} coefficients, got shape {a.shape}")
        object.__setattr__(self, "j", j)
        object.__setattr__(self, "alpha", a)

    @classmethod
    def zero(cls, j: int) -> "FourierState":
        return cls(j, np.zeros(2 * _check_j(j) + 1, dtype=complex))

    @classmethod
    def basis(cls, j: int, m: int, exact: bool = False) -> "FourierState":
        j = _check_j(j)
        if abs(m) > j:
            raise DomainError(f"|m| must not exceed {j}")
        if exact:
            a = np.array([Fraction(int(i == m + j)) for i in range(2 * j + 1)], dtype=object)
        else:
            a = np.zeros(2 * j + 1, dtype=complex)
            a[m + j] = 1
        return cls(j, a)

    @classmethod
    def from_function(cls, j: int, g: Callable[[int], complex]) -> "FourierState":
        j = _check_j(j)
        return cls(j, np.array([g(m) for m in range(-j, j + 1)], dtype=complex))

    @property
    def is_exact(self) -> bool:
        return self.alpha.dtype == object

    def __getitem__(self, m: int):
        if abs(m) > self.j:
            return 0
        return self.alpha[m + self.j]

    def inner(self, other: "FourierState") -> complex:
        """``<self|other>`` after nesting both to the larger spin."""
        a, b = _common(self, other)
        return complex(np.vdot(a.alpha.astype(complex), b.alpha.astype(complex)))

    def norm(self) -> float:
        return float(np.linalg.norm(self.alpha.astype(complex)))

    def norm_sq_exact(self) -> Fraction:
        total = Fraction(0)
        for v in self.alpha:
            if isinstance(v, ExactValue):
                total += v.square
            else:
                total += Fraction(v) ** 2
        return total

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["j", "m", "re_alpha", "im_alpha"])
        for m in range(-self.j, self.j + 1):
            v = complex(float(self[m])) if self.is_exact else complex(self[m])
            w.writerow([self.j, m, f"{v.real:.17g}", f"{v.imag:.17g}"])
        return buf.getvalue()


def nest(state: FourierState, j_to: int) -> FourierState:
    """Image of ``state`` at spin ``j_to >= state.j`` (``u(j, m) -> u(j', m)``)."""
    j_to = _check_j(j_to)
    if j_to < state.j:
        raise DomainError(f"cannot nest spin {state.j} into smaller spin {j_to}")
    pad = j_to - state.j
    if state.is_exact:
        zeros = [Fraction(0)] * pad
        return FourierState(j_to, np.array(zeros + list(state.alpha) + zeros, dtype=object))
    return FourierState(j_to, np.pad(state.alpha, pad))


def _common(a: FourierState, b: FourierState) -> tuple[FourierState, FourierState]:
    top = max(a.j, b.j)
    return nest(a, top), nest(b, top)


def nested_distance(phi: FourierState, psi: FourierState) -> float:
    """``l2`` distance after nesting the smaller-spin state up."""
    a, b = _common(phi, psi)
    return float(np.linalg.norm(a.alpha.astype(complex) - b.alpha.astype(complex)))


def j3_symbol(n: int, family: CharFamily | None = None, exact: bool = False):
    """Harmonic coefficient ``<Y_1^0|W(J_3)>`` (the only nonzero one).

    ``J_3 = sqrt(n(n+1)(n+2)/12) e(1, 0)``, so the coefficient is
    ``c_1 sqrt(n(n+2)/12)``.  Returns ``{(1, 0): value}``.
    """
    base = ExactValue.sqrt_of(Fraction(n * (n + 2), 12))
    if family is None:
        c1 = ExactValue.from_rational(1)
    elif exact:
        ex = family.exact_values(n, [1])
        if ex is None:
            raise DomainError(f"{family!r} has no exact characteristic numbers")
        c1 = ex[0]
    else:
        c1 = family.value(n, 1)
    value = base * c1 if exact else float(base) * float(c1)
    return {(1, 0): value}


def operator_action(
    f,
    family: CharFamily,
    state: FourierState,
    dual: bool = False,
    exact: bool = False,
) -> FourierState:
    """Apply the (dual) quantization of ``f`` at level ``n = 2j`` to ``state``.

    ``f`` is a ``HarmonicCoeffs`` or a mapping ``{(l, m): coefficient}``.
    The float path uses the operator matrix; ``exact=True`` evaluates the
    Clebsch-Gordan sum term by term with exact numbers (small ``j`` only).
    """
    j = state.j
    n = 2 * j
    if exact:
        return _exact_action(f, family, state, dual)
    if isinstance(f, HarmonicCoeffs):
        h = f.resized(n)
    else:
        h = HarmonicCoeffs.zeros(n)
        for (l, m), v in f.items():
            if l <= n:
                h[l, m] = complex(v)
    c = char_numbers(family, n)
    F = inverse_symbol(h, 1 / c if dual else c)
    beta = F @ state.alpha.astype(complex)[::-1]
    return FourierState(j, beta[::-1])


def _exact_action(f, family: CharFamily, state: FourierState, dual: bool) -> FourierState:
    j = state.j
    n = 2 * j
    items = f.items() if isinstance(f, dict) else list(f.items())
    cex = family.exact_values(n)
    if cex is None:
        raise DomainError(f"{family!r} has no exact characteristic numbers")
    root = ExactValue.sqrt_of(n + 1)
    out = []
    for m in range(-j, j + 1):
        acc = ExactValue.zero()
        for (l, mb), coef in items:
            if l > n:
                continue
            mp = m - mb
            if abs(mp) > j:
                continue
            alpha = state[mp]
            if not isinstance(alpha, ExactValue):
                alpha = ExactValue.from_rational(Fraction(alpha))
            if alpha.is_zero():
                continue
            coef = coef if isinstance(coef, ExactValue) else ExactValue.from_rational(Fraction(coef))
            cl = cex[l] if dual else 1 / cex[l]
            term = root * coef * cl * cgc(j, m, j, -mp, l, mb) * alpha * (-1) ** (j - mp)
            acc = acc + term
        out.append(acc)
    return FourierState(j, np.array(out, dtype=object))


def modified_norm_sq(state: FourierState) -> float:
    """``(j!)^2 sum |alpha_m|^2 / ((j-m)!(j+m)!)``, the squared norm of the Fourier polynomial."""
    j = state.j
    ms = np.arange(-j, j + 1)
    lw = 2 * math.lgamma(j + 1) - np.array([math.lgamma(j - m + 1) + math.lgamma(j + m + 1) for m in ms])
    return float(np.sum(np.exp(lw) * np.abs(state.alpha.astype(complex)) ** 2))


@dataclass
class StateSequence:
    """Lazily generated states ``j -> phi^j`` (memoized, single writer)."""

    generator: Callable[[int], FourierState]
    _cache: dict = field(default_factory=dict, repr=False)

    def at(self, j: int) -> FourierState:
        j = _check_j(j)
        if j not in self._cache:
            st = self.generator(j)
            if st.j != j:
                raise DomainError(f"generator returned spin {st.j} for j = {j}")
            self._cache[j] = st
        return self._cache[j]

    @classmethod
    def constant(cls, state: FourierState) -> "StateSequence":
        return cls(lambda j: nest(state, j))

    @classmethod
    def flat(cls) -> "StateSequence":
        """``alpha_m^j = 1/sqrt(2j+1)``: unit norm, every coefficient tends to 0."""
        return cls(lambda j: FourierState(j, np.full(2 * j + 1, 1 / math.sqrt(2 * j + 1), dtype=complex)))

    @classmethod
    def image(cls, f, family: CharFamily, source: "StateSequence", dual: bool = False) -> "StateSequence":
        return cls(lambda j: operator_action(f, family, source.at(j), dual))


def convergence_diagnostics(seq: StateSequence, j_grid, tol: float = 1e-8, window: int | None = None) -> dict:
    """Cauchy test in the nested norm, coefficient limits and norm checks.

    * ``cauchy``: verdict from successive nested distances (last one below
      ``tol`` with a non-increasing tail -> yes; the last two both above
      ``0.1`` and not shrinking -> no).
    * ``coefficients``: ``alpha_m^j`` along the grid for ``|m| <= window``.
    * ``norm_discontinuous``: every coefficient in the window shrinks
      towards 0 while the norm does not -- the coefficientwise limit loses
      the norm.
    * ``tannery``: the plain and modified (Fourier-polynomial) squared norms
      along the grid, which share their limit for convergent sequences.
    """
    grid = [int(j) for j in j_grid]
    if grid != sorted(grid) or len(set(grid)) != len(grid):
        raise DomainError("j_grid must be strictly ascending")
    states = [seq.at(j) for j in grid]
    window = grid[0] if window is None else window
    dists = [nested_distance(a, b) for a, b in zip(states, states[1:])]
    cauchy = Verdict.INCONCLUSIVE
    if dists:
        tail = dists[-3:]
        if tail[-1] < tol and all(x >= y for x, y in zip(tail, tail[1:])):
            cauchy = Verdict.YES
        elif len(tail) >= 2 and tail[-1] > 0.1 and tail[-1] >= 0.5 * tail[-2]:
            cauchy = Verdict.NO
    coeffs = {m: [complex(s[m]) for s in states] for m in range(-window, window + 1)}
    norms = [s.norm() for s in states]
    window_mass = [sum(abs(complex(s[m])) ** 2 for m in range(-window, window + 1)) for s in states]
    shrinking = len(states) >= 3 and all(b < a for a, b in zip(window_mass, window_mass[1:]))
    norm_steady = len(norms) >= 2 and abs(norms[-1] - norms[-2]) < 1e-6 * max(1.0, norms[-1]) and norms[-1] > 1e-3
    tannery = {
        "l2": [n * n for n in norms],
        "modified": [modified_norm_sq(s) for s in states],
    }
    return {
        "j": grid,
        "distances": dists,
        "cauchy": cauchy,
        "coefficients": coeffs,
        "limits": {m: v[-1] for m, v in coeffs.items()},
        "norms": norms,
        "window_mass": window_mass,
        "norm_discontinuous": bool(shrinking and norm_steady),
        "tannery": tannery,
        "tannery_gap": abs(tannery["l2"][-1] - tannery["modified"][-1]),
    }


def upper_bounded_check(family: CharFamily, f, n_grid, dual: bool = False) -> Verdict:
    """Whether the quantized sequence has bounded normalized norms on the grid.

    Bounded norms are necessary for the sequence to define an operator on
    the ground space.
    """
    report = asymptotic_norm_report(family, f, n_grid, dual)
    if report.verdict == "unbounded":
        return Verdict.NO
    if report.verdict in ("converges", "upper-bounded"):
        return Verdict.YES
    return Verdict.INCONCLUSIVE
