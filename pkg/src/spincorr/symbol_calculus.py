"""Coupled basis, symbol map and its inverse, twisted products.

Operators on the spin-j space are ``(n+1) x (n+1)`` matrices in the standard
basis ``u(j, m)``, row ``i`` holding ``m = j - i``.  Every coupled
basis element ``e(l, m)`` is supported on a single diagonal (column minus
row equal to ``m``), so we store only that diagonal.  For fixed ``m`` those
diagonals are the eigenvectors of the Casimir ``sum_k [J_k, [J_k, .]]``
restricted to the diagonal (a symmetric tridiagonal matrix with eigenvalues
``l(l+1)``).  Phases follow the ladder construction ``e(l, l) ~ (-1)^l J_+^l``,
``e(l, m-1) ~ [J_-, e(l, m)]``, which makes the first entry of ``e(l, m)``
carry the sign ``(-1)^m``.  Solving the eigenproblem instead of running the
ladder keeps full precision at large ``n``; the commutator chain loses about
a digit per step.

The symbol of ``P`` for characteristic numbers ``c`` is

    a_l^m = c_l * tr(e(l, m)^T P) / sqrt(n+1),

which sends ``sqrt(n+1) e(l, m)`` to ``c_l Y_l^m``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .correspondence_catalog import CharFamily, char_numbers
from .errors import DomainError, ResourceError
from .exact_spin_algebra import ExactValue, cgc_diag, cgc_diag_column
from .series import HarmonicCoeffs, LegendreCoeffs, harmonic, sphere_grid

__all__ = [
    "MAX_DENSE_N",
    "spin_matrices",
    "coupled_diagonal",
    "coupled_basis",
    "symbol",
    "inverse_symbol",
    "projector",
    "projector_symbol",
    "twisted_product",
    "poisson_bracket",
    "DiagnosticReport",
    "poisson_diagnostic",
]

#: largest level for which dense operator products are formed
MAX_DENSE_N = 256


def _lowering(n: int) -> np.ndarray:
    i = np.arange(n)
    return np.sqrt((n - i) * (i + 1.0))


def spin_matrices(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(J_3, J_+, J_-)`` in the standard basis, with real nonnegative ladders."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    j = n / 2
    b = _lowering(n)
    jm = np.diag(b, -1)
    return np.diag(j - np.arange(n + 1.0)), jm.T.copy(), jm


def _casimir_band(n: int, m: int) -> tuple[np.ndarray, np.ndarray]:
    # sum_k [J_k, [J_k, X]] restricted to matrices on diagonal m >= 0
    j = n / 2
    r = np.arange(n + 1 - m)
    b = _lowering(n)
    d = 2 * j * (j + 1) - 2 * (j - r) * (j - r - m)
    e = -b[: n - m] * b[m:n]
    return d, e


@lru_cache(maxsize=4096)
def _coupled_block(n: int, m: int) -> np.ndarray:
    """Rows ``l - m`` hold the diagonal of ``e(l, m)``, ``m <= l <= n``."""
    size = n + 1 - m
    if size == 1:
        out = np.full((1, 1), (-1.0) ** m)
        out.setflags(write=False)
        return out
    d, e = _casimir_band(n, m)
    _, vecs = eigh_tridiagonal(d, e)
    vecs = vecs.T.copy()
    lam = np.array([l * (l + 1.0) for l in range(m, n + 1)])
    # first sizeable entry of each eigenvector; its sign relative to the
    # r = 0 entry comes from the three-term recurrence, which grows (and so
    # stays accurate) from the boundary up to that point
    mags = np.abs(vecs)
    first = np.argmax(mags >= 0.1 * mags.max(axis=1, keepdims=True), axis=1)
    prev = np.zeros(size)
    cur = np.full(size, (-1.0) ** m)
    ref = np.where(first == 0, cur, 0.0)
    for r in range(int(first.max())):
        nxt = ((lam - d[r]) * cur - (e[r - 1] * prev if r else 0.0)) / e[r]
        prev, cur = cur, nxt
        scale = np.maximum(np.abs(cur), 1.0)
        prev, cur = prev / scale, cur / scale
        ref = np.where(first == r + 1, cur, ref)
    picked = vecs[np.arange(size), first]
    vecs *= np.where(np.sign(ref) == np.sign(picked), 1.0, -1.0)[:, None]
    vecs.setflags(write=False)
    return vecs


def _check_lm(n: int, l: int, m: int) -> None:
    if not (0 <= l <= n and abs(m) <= l):
        raise DomainError(f"(l, m) = ({l}, {m}) is not valid at level n = {n}")


def coupled_diagonal(n: int, l: int, m: int) -> np.ndarray:
    """The nonzero diagonal of ``e(l, m)``: entries ``e[r, r+m]`` (or ``e[r+|m|, r]``)."""
    _check_lm(n, l, m)
    d = _coupled_block(n, abs(m))[l - abs(m)]
    return -d if (m < 0 and m % 2) else d


def coupled_basis(n: int, l: int, m: int) -> np.ndarray:
    """Dense ``e(l, m)``; ``e(l, -m) = (-1)^m e(l, m)^T``."""
    d = coupled_diagonal(n, l, m)
    return np.diag(d, m)


def _char_vector(c, n: int) -> np.ndarray:
    if isinstance(c, CharFamily):
        return char_numbers(c, n)
    c = np.asarray(c)
    if c.shape != (n + 1,):
        raise DomainError(f"need {n + 1} characteristic numbers, got shape {c.shape}")
    if np.any(c == 0):
        raise DomainError("characteristic numbers must be nonzero")
    return c


def _offset_diagonal(P: np.ndarray, m: int) -> np.ndarray:
    return np.diagonal(P, m)


def symbol(P, c) -> HarmonicCoeffs:
    """Harmonic coefficients of the symbol of ``P``.

    ``c`` is a characteristic-number vector of length ``n+1`` or a family.
    """
    P = np.asarray(P)
    if P.ndim != 2 or P.shape[0] != P.shape[1]:
        raise DomainError("operator must be a square matrix")
    n = P.shape[0] - 1
    c = _char_vector(c, n)
    out = HarmonicCoeffs.zeros(n)
    scale = 1 / math.sqrt(n + 1)
    for m in range(-n, n + 1):
        diag = _offset_diagonal(P, m)
        if not np.any(diag):
            continue
        for l in range(abs(m), n + 1):
            out.a[l, m + n] = c[l] * scale * np.dot(coupled_diagonal(n, l, m), diag)
    return out


def inverse_symbol(f: HarmonicCoeffs, c) -> np.ndarray:
    """The operator whose symbol is ``f``: ``sum (a_l^m / c_l) sqrt(n+1) e(l, m)``."""
    n = f.n
    c = _char_vector(c, n)
    dtype = complex if np.iscomplexobj(f.a) and np.any(f.a.imag) else float
    P = np.zeros((n + 1, n + 1), dtype=dtype)
    scale = math.sqrt(n + 1)
    idx = np.arange(n + 1)
    for m in range(-n, n + 1):
        col = f.a[:, m + n]
        if not np.any(col):
            continue
        diag = np.zeros(n + 1 - abs(m), dtype=dtype)
        for l in range(abs(m), n + 1):
            if col[l] != 0:
                v = col[l] / c[l] * scale
                diag = diag + (v if dtype is complex else v.real) * coupled_diagonal(n, l, m)
        rows = idx[: n + 1 - abs(m)]
        if m >= 0:
            P[rows, rows + m] += diag
        else:
            P[rows - m, rows] += diag
    return P


def projector(n: int, k: int) -> np.ndarray:
    """``Pi_k``: orthogonal projector onto ``u(j, j-k+1)``."""
    if not 1 <= k <= n + 1:
        raise DomainError(f"k must lie in [1, {n + 1}]")
    P = np.zeros((n + 1, n + 1))
    P[k - 1, k - 1] = 1.0
    return P


def projector_symbol(n: int, k: int, c, exact: bool = False) -> LegendreCoeffs:
    """Symbol of ``Pi_k`` as a Legendre series in ``z``.

    The ``P_l`` coefficient is ``(-1)^(k-1) c_l C^{jjl}_{m,-m,0} sqrt((2l+1)/(n+1))``
    (``1/(n+1)`` at ``l = 0``).  With ``exact=True`` and a family that has
    exact numbers, the result also carries exact values.
    """
    if not 1 <= k <= n + 1:
        raise DomainError(f"k must lie in [1, {n + 1}]")
    ls = np.arange(n + 1)
    if isinstance(c, CharFamily):
        cs, clog = c.log_values(n)
    else:
        cv = _char_vector(c, n)
        cs = np.sign(cv).astype(int)
        clog = np.log(np.abs(cv))
    gs, glog = cgc_diag_column(n, k, ls)
    sign = (-1) ** (k - 1) * cs * gs
    logs = clog + glog + 0.5 * (np.log(2 * ls + 1.0) - math.log(n + 1))
    with np.errstate(over="ignore", under="ignore"):
        a = sign * np.exp(logs)
    ex = None
    if exact:
        cex = c.exact_values(n) if isinstance(c, CharFamily) else None
        if cex is None:
            raise DomainError("exact projector symbols need a family with exact numbers")
        ex = tuple(
            (-1) ** (k - 1) * cex[l] * cgc_diag(n, k, l) * ExactValue.sqrt_of(Fraction(2 * l + 1, n + 1))
            for l in range(n + 1)
        )
    return LegendreCoeffs(a, ex)


def twisted_product(f: HarmonicCoeffs, g: HarmonicCoeffs, c) -> HarmonicCoeffs:
    """``f * g`` induced by the matrix product: symbol(F G)."""
    if f.n != g.n:
        raise DomainError("twisted product needs both symbols at the same level")
    if f.n > MAX_DENSE_N:
        raise ResourceError(f"dense twisted products are capped at n = {MAX_DENSE_N}")
    c = _char_vector(c, f.n)
    return symbol(inverse_symbol(f, c) @ inverse_symbol(g, c), c)


def poisson_bracket(f: HarmonicCoeffs, g: HarmonicCoeffs, z, theta) -> np.ndarray:
    """``{f, g} = df/dtheta dg/dz - df/dz dg/dtheta`` at the given points."""
    return f.evaluate(z, theta, "theta") * g.evaluate(z, theta, "z") - f.evaluate(
        z, theta, "z"
    ) * g.evaluate(z, theta, "theta")


def _evaluate_columns(h: HarmonicCoeffs, Z, TH) -> np.ndarray:
    # sum over l for each populated m at once
    from scipy.special import sph_harm_y

    polar = np.arccos(Z)
    out = np.zeros(Z.shape, dtype=complex)
    ls = np.arange(h.n + 1)
    for m in range(-h.n, h.n + 1):
        col = h.a[:, m + h.n]
        mask = (ls >= abs(m)) & (col != 0)
        if not np.any(mask):
            continue
        sel = ls[mask]
        y = sph_harm_y(sel[:, None, None], m, polar[None], TH[None])
        out += np.tensordot(col[mask], y, axes=1)
    return out * math.sqrt(4 * math.pi)


@dataclass
class DiagnosticReport:
    """Sup-norm residuals of the three Poisson-type conditions per level."""

    pair: tuple[tuple[int, int], tuple[int, int]]
    family: str
    sign: int
    rows: list[dict] = field(default_factory=list)

    def column(self, name: str) -> np.ndarray:
        return np.array([r[name] for r in self.rows])

    def decreasing(self, name: str) -> bool:
        col = self.column(name)
        return bool(col[-1] < col[0])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "residual_i", "residual_ii", "residual_iii"])
        for r in self.rows:
            w.writerow([r["n"]] + [f"{r[k]:.17g}" for k in ("residual_i", "residual_ii", "residual_iii")])
        return buf.getvalue()


def poisson_diagnostic(
    l1: int,
    m1: int,
    l2: int,
    m2: int,
    family: CharFamily,
    n_grid,
    sign: int = 1,
    grid: tuple[int, int] = (64, 64),
) -> DiagnosticReport:
    """Residuals of the Poisson-type conditions for ``f = Y_l1^m1``, ``g = Y_l2^m2``.

    (i)   ``f*g - g*f``
    (ii)  ``f*g + g*f - 2 f g``
    (iii) ``n (f*g - g*f) - 2i sign {f, g}``  (``sign=-1`` tests the anti variant)

    Each residual is a sup over a Gauss-Legendre x uniform-azimuth grid.
    """
    if l1 < 1 or l2 < 1:
        raise DomainError("degrees must be at least 1")
    Z, TH, _ = sphere_grid(*grid)
    report = DiagnosticReport(((l1, m1), (l2, m2)), family.name, sign)
    for n in n_grid:
        n = int(n)
        if n < max(l1, l2):
            raise DomainError(f"level {n} too small for degrees {l1}, {l2}")
        f = harmonic(n, l1, m1)
        g = harmonic(n, l2, m2)
        c = char_numbers(family, n)
        fg = _evaluate_columns(twisted_product(f, g, c), Z, TH)
        gf = _evaluate_columns(twisted_product(g, f, c), Z, TH)
        fv = _evaluate_columns(f, Z, TH)
        gv = _evaluate_columns(g, Z, TH)
        pb = poisson_bracket(f, g, Z, TH)
        comm = fg - gf
        report.rows.append(
            {
                "n": n,
                "residual_i": float(np.max(np.abs(comm))),
                "residual_ii": float(np.max(np.abs(fg + gf - 2 * fv * gv))),
                "residual_iii": float(np.max(np.abs(n * comm - 2j * sign * pb))),
            }
        )
    return report
