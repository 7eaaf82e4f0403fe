"""Characteristic-number families ``c_l^n`` and their classification.

A family is anything that can produce, for each level ``n``, the numbers
``c_0^n = 1, c_1^n, ..., c_n^n``.  Values are exchanged in log form
(``sign``, ``ln|c|``) because the interesting families leave the double
range long before the interesting ``n``: Berezin numbers decay like
``2^{-n}`` on the diagonal, Toeplitz numbers blow up like ``2^n``, and the
counterexample family divides by Legendre coefficients of ``e^z``, which
are around ``1e-5700`` at ``l = 2000``.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import ConfigError, DomainError, SingularityError
from .exact_spin_algebra import (
    EXACT_THRESHOLD,
    FACTORIALS,
    ExactValue,
    HalfInt,
    cgc_diag_log,
    diag_integer_rows,
    diag_table,
)

__all__ = [
    "FamilyKind",
    "CharFamily",
    "StandardSW",
    "AlternateSW",
    "StandardBerezin",
    "AlternateBerezin",
    "StandardToeplitz",
    "AlternateToeplitz",
    "UpperMiddleState",
    "LowerMiddleState",
    "DualOf",
    "KernelWeights",
    "KernelWeightsFamily",
    "Counterexample",
    "Custom",
    "KernelCharNumbers",
    "Verdict",
    "ClassificationReport",
    "char_numbers",
    "dual",
    "from_kernel_weights",
    "weights_from_char_numbers",
    "classify",
    "counterexample_family",
    "family_from_spec",
    "berezin_number",
]


class FamilyKind(str, enum.Enum):
    STANDARD_SW = "sw"
    ALTERNATE_SW = "sw-alternate"
    STANDARD_BEREZIN = "berezin"
    ALTERNATE_BEREZIN = "berezin-alternate"
    STANDARD_TOEPLITZ = "toeplitz"
    ALTERNATE_TOEPLITZ = "toeplitz-alternate"
    UPPER_MIDDLE = "upper-middle"
    LOWER_MIDDLE = "lower-middle"
    DUAL = "dual"
    KERNEL_WEIGHTS = "kernel_weights"
    COUNTEREXAMPLE = "counterexample"
    CUSTOM = "custom"


def _ls(n: int, ls) -> np.ndarray:
    if ls is None:
        return np.arange(n + 1)
    out = np.atleast_1d(np.asarray(ls, dtype=int))
    if out.size and (out.min() < 0 or out.max() > n):
        raise DomainError(f"degrees must lie in [0, {n}]")
    return out


def _alt_signs(ls: np.ndarray) -> np.ndarray:
    return np.where(ls % 2 == 1, -1, 1)


class CharFamily:
    """A bi-sequence of characteristic numbers ``c_l^n`` with ``c_0^n = 1``.

    Subclasses implement ``log_values``; everything else derives from it.
    """

    kind: FamilyKind
    #: short label used in reports and CSV/JSON output
    name: str = "family"

    def log_values(self, n: int, ls=None) -> tuple[np.ndarray, np.ndarray]:
        """Signs and ``ln|c_l^n|`` for ``l`` in ``ls`` (default ``0..n``)."""
        raise NotImplementedError

    def exact_values(self, n: int, ls=None) -> list[ExactValue] | None:
        """Exact values when the family admits them, else ``None``."""
        return None

    def values(self, n: int, ls=None) -> np.ndarray:
        signs, logs = self.log_values(n, ls)
        with np.errstate(over="ignore", under="ignore"):
            return signs * np.exp(logs)

    def value(self, n: int, l: int) -> float:
        return float(self.values(n, [l])[0])

    def to_spec(self) -> dict:
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"{type(self).__name__}()"


def _check_level(n: int) -> None:
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise DomainError(f"level n must be a positive integer, got {n!r}")


# ---------------------------------------------------------------------------
# closed-form families


class _SW(CharFamily):
    alternate = False

    def log_values(self, n, ls=None):
        _check_level(n)
        ls = _ls(n, ls)
        signs = _alt_signs(ls) if self.alternate else np.ones(ls.shape, dtype=int)
        return signs, np.zeros(ls.shape)

    def exact_values(self, n, ls=None):
        signs, _ = self.log_values(n, ls)
        return [ExactValue(int(s), Fraction(1)) for s in signs]

    def to_spec(self):
        return {"kind": "sw", "alternate": self.alternate}


class StandardSW(_SW):
    """Standard Stratonovich-Weyl: every ``c_l^n = 1``."""

    kind = FamilyKind.STANDARD_SW
    name = "sw"


class AlternateSW(_SW):
    """Alternate Stratonovich-Weyl: ``c_l^n = (-1)^l``."""

    kind = FamilyKind.ALTERNATE_SW
    name = "sw-alternate"
    alternate = True


def berezin_number(n: int, l: int) -> ExactValue:
    """``b_l^n = n! sqrt(n+1) / sqrt((n+l+1)! (n-l)!)`` exactly."""
    if not 0 <= l <= n:
        raise DomainError(f"need 0 <= l <= n, got l={l}, n={n}")
    f = FACTORIALS.exact
    return ExactValue(1, Fraction(f(n) ** 2 * (n + 1), f(n + l + 1) * f(n - l)))


def _berezin_logs(n: int, ls: np.ndarray) -> np.ndarray:
    lf = FACTORIALS.log_array(2 * n + 1)
    return lf[n] + 0.5 * math.log(n + 1) - 0.5 * (lf[n + ls + 1] + lf[n - ls])


class _Berezin(CharFamily):
    alternate = False
    toeplitz = False

    def log_values(self, n, ls=None):
        _check_level(n)
        ls = _ls(n, ls)
        logs = _berezin_logs(n, ls)
        if self.toeplitz:
            logs = -logs
        signs = _alt_signs(ls) if self.alternate else np.ones(ls.shape, dtype=int)
        return signs, logs

    def exact_values(self, n, ls=None):
        _check_level(n)
        out = []
        for l in _ls(n, ls):
            b = berezin_number(n, int(l))
            if self.toeplitz:
                b = ExactValue(1, 1 / b.square)
            out.append(-b if (self.alternate and l % 2) else b)
        return out

    def to_spec(self):
        return {"kind": "toeplitz" if self.toeplitz else "berezin", "alternate": self.alternate}


class StandardBerezin(_Berezin):
    """Standard Berezin (highest-weight projector kernel)."""

    kind = FamilyKind.STANDARD_BEREZIN
    name = "berezin"


class AlternateBerezin(_Berezin):
    """Alternate Berezin: ``(-1)^l b_l^n`` (lowest-weight projector kernel)."""

    kind = FamilyKind.ALTERNATE_BEREZIN
    name = "berezin-alternate"
    alternate = True


class StandardToeplitz(_Berezin):
    """Standard Toeplitz: ``t_l^n = 1 / b_l^n``, the dual of standard Berezin."""

    kind = FamilyKind.STANDARD_TOEPLITZ
    name = "toeplitz"
    toeplitz = True


class AlternateToeplitz(_Berezin):
    """Alternate Toeplitz: ``(-1)^l / b_l^n``."""

    kind = FamilyKind.ALTERNATE_TOEPLITZ
    name = "toeplitz-alternate"
    alternate = True
    toeplitz = True


# ---------------------------------------------------------------------------
# kernel weights (convex combinations of projectors)


@dataclass(frozen=True)
class KernelWeights:
    """Convex weights ``a_1..a_{n+1}`` on the projectors ``Pi_k`` at level ``n``."""

    n: int
    a: tuple

    def __post_init__(self) -> None:
        a = tuple(self.a)
        if len(a) != self.n + 1:
            raise DomainError(f"need {self.n + 1} weights, got {len(a)}")
        if all(isinstance(x, (int, Fraction)) for x in a):
            a = tuple(Fraction(x) for x in a)
            if any(x < 0 for x in a) or sum(a) != 1:
                raise DomainError("rational weights must be nonnegative and sum to 1")
        else:
            arr = np.asarray(a, dtype=float)
            if np.any(arr < 0) or abs(arr.sum() - 1) > 1e-12:
                raise DomainError("weights must be nonnegative and sum to 1")
            a = tuple(float(x) for x in arr)
        object.__setattr__(self, "a", a)

    @property
    def is_rational(self) -> bool:
        return all(isinstance(x, Fraction) for x in self.a)

    @classmethod
    def projector(cls, n: int, k: int) -> "KernelWeights":
        if not 1 <= k <= n + 1:
            raise DomainError(f"projector index k={k} out of range for n={n}")
        return cls(n, tuple(Fraction(int(i == k - 1)) for i in range(n + 1)))

    @classmethod
    def uniform(cls, n: int) -> "KernelWeights":
        return cls(n, tuple(Fraction(1, n + 1) for _ in range(n + 1)))

    @classmethod
    def upper_middle(cls, n: int) -> "KernelWeights":
        j = HalfInt(n)
        k1 = (j + HalfInt(1)).floor()  # floor(j + 1/2)
        k2 = (j + HalfInt(2)).floor()  # floor(j + 1)
        a = [Fraction(0)] * (n + 1)
        a[k1 - 1] += Fraction(1, 2)
        a[k2 - 1] += Fraction(1, 2)
        return cls(n, tuple(a))


@dataclass(frozen=True)
class KernelCharNumbers:
    """Characteristic numbers produced by a kernel; flags vanishing entries.

    ``zeros`` lists the degrees ``l >= 1`` where ``c_l^n = 0``: such a kernel
    defines only a pre-symbol map, not a symbol correspondence.
    """

    n: int
    values: np.ndarray
    exact: tuple | None
    zeros: tuple

    @property
    def is_correspondence(self) -> bool:
        return not self.zeros

    def within_bound(self) -> bool:
        """``|c_l| <= sqrt((n+1)/(2l+1))`` for ``1 <= l <= n``; exact when possible."""
        n = self.n
        if self.exact is not None:
            return all(self.exact[l].square <= Fraction(n + 1, 2 * l + 1) for l in range(1, n + 1))
        ls = np.arange(1, n + 1)
        return bool(np.all(np.abs(self.values[1:]) <= np.sqrt((n + 1) / (2 * ls + 1)) * (1 + 1e-12)))

    def is_isometric(self) -> bool:
        """All ``|c_l| = 1`` (exactly, when exact values are present)."""
        if self.exact is not None:
            return all(v.square == 1 for v in self.exact[1:])
        return bool(np.allclose(np.abs(self.values[1:]), 1.0, rtol=0, atol=1e-12))


@lru_cache(maxsize=64)
def _integer_table(n: int) -> tuple[tuple[tuple[int, ...], ...], tuple[Fraction, ...]]:
    """Integer matrix ``R[k-1][l]`` and rationals ``u2[l]`` with
    ``(-1)^(k+1) sqrt((n+1)/(2l+1)) C^{jjl}_{m,-m,0} = R[k-1][l] * sqrt(u2[l])``."""
    f = FACTORIALS.exact
    cols = [list(row) for _, row in diag_integer_rows(n)]
    rows = tuple(tuple(cols[l][a] for l in range(n + 1)) for a in range(n + 1))
    u2 = tuple(Fraction(n + 1, f(n + l + 1) * f(n - l)) for l in range(n + 1))
    return rows, u2


def _weight_matrix(n: int) -> np.ndarray:
    return diag_table(n)


def from_kernel_weights(w: KernelWeights) -> KernelCharNumbers:
    """``c_l^n = sqrt((n+1)/(2l+1)) sum_k (-1)^(k+1) a_k C^{jjl}_{m,-m,0}``.

    Rational weights go through an exact integer path and return exact
    values alongside the floats.
    """
    n = w.n
    _check_level(n)
    if w.is_rational:
        rows, u2 = _integer_table(n)
        den = math.lcm(*(x.denominator for x in w.a))
        ints = [int(x * den) for x in w.a]
        exact = []
        for l in range(n + 1):
            s = sum(wk * rows[k][l] for k, wk in enumerate(ints) if wk)
            q = Fraction(s, den)
            exact.append(ExactValue((s > 0) - (s < 0), q * q * u2[l]))
        values = np.array([float(v) for v in exact])
        zeros = tuple(l for l in range(1, n + 1) if exact[l].is_zero())
        return KernelCharNumbers(n, values, tuple(exact), zeros)
    a = np.asarray(w.a, dtype=float)
    ls = np.arange(n + 1)
    values = np.sqrt((n + 1) / (2 * ls + 1)) * (_weight_matrix(n) @ a)
    zeros = tuple(int(l) for l in range(1, n + 1) if abs(values[l]) < 1e-14)
    return KernelCharNumbers(n, values, None, zeros)


def weights_from_char_numbers(c: Sequence[float]) -> np.ndarray:
    """Invert the weights-to-``c`` map; the weights of the (unique) kernel.

    The matrix ``O`` above is orthogonal (the rows are orthonormal in ``k``),
    so the inverse is its transpose.
    """
    c = np.asarray(c, dtype=float)
    n = c.size - 1
    _check_level(n)
    ls = np.arange(n + 1)
    return _weight_matrix(n).T @ (c * np.sqrt((2 * ls + 1) / (n + 1)))


class KernelWeightsFamily(CharFamily):
    """Family generated by a weights rule ``n -> KernelWeights``.

    ``rule`` is ``"uniform"``, an explicit weight sequence (valid only at its
    own level), or a callable.
    """

    kind = FamilyKind.KERNEL_WEIGHTS

    def __init__(self, rule: str | Sequence | Callable[[int], KernelWeights]) -> None:
        self.rule = rule
        self.name = "kernel_weights"

    def weights(self, n: int) -> KernelWeights:
        if callable(self.rule):
            w = self.rule(n)
        elif self.rule == "uniform":
            w = KernelWeights.uniform(n)
        elif isinstance(self.rule, str):
            raise ConfigError(f"unknown weights rule {self.rule!r}")
        else:
            a = tuple(self.rule)
            if len(a) != n + 1:
                raise ConfigError(f"explicit weights define level {len(a) - 1}, not {n}")
            w = KernelWeights(n, a)
        if not isinstance(w, KernelWeights) or w.n != n:
            raise ConfigError("weights rule must return KernelWeights at the requested level")
        return w

    def _sparse_values(self, n: int, ls: np.ndarray) -> np.ndarray:
        w = self.weights(n)
        a = np.asarray(w.a, dtype=float)
        out = np.empty(ls.shape)
        support = [k for k in range(n + 1) if a[k] != 0]
        for i, l in enumerate(ls):
            acc = []
            for kk in support:
                s, lg = cgc_diag_log(n, kk + 1, int(l))
                if s:
                    acc.append((-1 if kk % 2 else 1) * a[kk] * s * math.exp(lg))
            out[i] = math.sqrt((n + 1) / (2 * l + 1)) * math.fsum(acc)
        return out

    def log_values(self, n, ls=None):
        _check_level(n)
        ls = _ls(n, ls)
        w = self.weights(n)
        if w.is_rational and n <= EXACT_THRESHOLD:
            ex = self.exact_values(n, ls)
            signs = np.array([v.sign for v in ex], dtype=int)
            logs = np.array([v.log_abs() for v in ex])
            return signs, logs
        vals = self._sparse_values(n, ls)
        with np.errstate(divide="ignore"):
            return np.sign(vals).astype(int), np.log(np.abs(vals))

    def exact_values(self, n, ls=None):
        ls = _ls(n, ls)
        w = self.weights(n)
        if not w.is_rational:
            return None
        res = from_kernel_weights(w)
        return [res.exact[int(l)] for l in ls]

    def to_spec(self):
        if callable(self.rule):
            raise ConfigError("callable weight rules have no JSON form")
        rule = self.rule if isinstance(self.rule, str) else [str(x) for x in self.rule]
        return {"kind": "kernel_weights", "rule": rule}

    def __repr__(self):
        return f"KernelWeightsFamily({self.rule!r})"


class UpperMiddleState(KernelWeightsFamily):
    """Kernel ``(Pi_{floor(j+1/2)} + Pi_{floor(j+1)}) / 2``."""

    kind = FamilyKind.UPPER_MIDDLE

    def __init__(self) -> None:
        super().__init__(KernelWeights.upper_middle)
        self.name = "upper-middle"

    def to_spec(self):
        return {"kind": "middle", "lower": False}

    def __repr__(self):
        return "UpperMiddleState()"


class LowerMiddleState(CharFamily):
    """``(-1)^l`` times the upper-middle-state numbers."""

    kind = FamilyKind.LOWER_MIDDLE
    name = "lower-middle"

    def __init__(self) -> None:
        self._upper = UpperMiddleState()

    def log_values(self, n, ls=None):
        ls = _ls(n, ls)
        s, lg = self._upper.log_values(n, ls)
        return s * _alt_signs(ls), lg

    def exact_values(self, n, ls=None):
        ls = _ls(n, ls)
        ex = self._upper.exact_values(n, ls)
        return [(-v if l % 2 else v) for v, l in zip(ex, ls)]

    def to_spec(self):
        return {"kind": "middle", "lower": True}

    def __repr__(self):
        return "LowerMiddleState()"


# ---------------------------------------------------------------------------
# derived families


class DualOf(CharFamily):
    """Dual correspondence: ``c~_l^n = 1 / c_l^n``."""

    kind = FamilyKind.DUAL

    def __init__(self, inner: CharFamily) -> None:
        self.inner = inner
        self.name = f"dual({inner.name})"

    def log_values(self, n, ls=None):
        s, lg = self.inner.log_values(n, ls)
        if np.any(s == 0):
            raise SingularityError(f"{self.inner!r} has a vanishing number at n={n}; no dual")
        return s, -lg

    def exact_values(self, n, ls=None):
        ex = self.inner.exact_values(n, ls)
        if ex is None:
            return None
        if any(v.is_zero() for v in ex):
            raise SingularityError(f"{self.inner!r} has a vanishing number at n={n}; no dual")
        return [ExactValue(v.sign, 1 / v.square) for v in ex]

    def to_spec(self):
        return {"kind": "dual", "of": self.inner.to_spec()}

    def __repr__(self):
        return f"DualOf({self.inner!r})"


def _coeff_logs(source, l: int) -> tuple[int, float]:
    """Sign and log-magnitude of the Legendre coefficient ``a_l`` of a source."""
    if hasattr(source, "log_legendre_coeffs"):
        s, lg = source.log_legendre_coeffs(l)
        return int(s[l]), float(lg[l])
    if hasattr(source, "legendre_coeffs"):
        a = float(np.asarray(source.legendre_coeffs(l))[l])
    else:
        seq = np.asarray(source, dtype=float)
        if l >= seq.size:
            raise DomainError(f"coefficient a_{l} not supplied")
        a = float(seq[l])
    if abs(a) <= 1e-14:
        raise DomainError(f"Legendre coefficient a_{l} = {a:.3g} vanishes within 1e-14")
    return (1 if a > 0 else -1), math.log(abs(a))


class Counterexample(CharFamily):
    """``c_l^l = (2l+1)/a_l`` on the diagonal, ``1`` (or ``(-1)^l``) elsewhere.

    With ``inverted=True`` the diagonal is ``a_l/(2l+1)`` instead; this is the
    dual family whose quantizations have unbounded norm.
    """

    kind = FamilyKind.COUNTEREXAMPLE

    def __init__(self, source, anti: bool = False, inverted: bool = False) -> None:
        self.source = source
        self.anti = anti
        self.inverted = inverted
        self.name = "counterexample" + ("-anti" if anti else "") + ("-dual" if inverted else "")

    def log_values(self, n, ls=None):
        _check_level(n)
        ls = _ls(n, ls)
        signs = _alt_signs(ls) if self.anti else np.ones(ls.shape, dtype=int)
        logs = np.zeros(ls.shape)
        hit = ls == n
        if np.any(hit):
            s, lg = _coeff_logs(self.source, n)
            diag = math.log(2 * n + 1) - lg
            logs[hit] = -diag if self.inverted else diag
            signs[hit] = s
        return signs, logs

    def to_spec(self):
        spec = getattr(self.source, "to_spec", None)
        if spec is None:
            raise ConfigError("counterexample source has no JSON form")
        out = {"kind": "counterexample", "f": spec(), "anti": self.anti}
        if self.inverted:
            return {"kind": "dual", "of": out}
        return out

    def __repr__(self):
        return f"Counterexample({self.source!r}, anti={self.anti}, inverted={self.inverted})"


class Custom(CharFamily):
    """Explicit table ``{n: [c_0, ..., c_n]}``; other levels fall back to ``fallback``."""

    kind = FamilyKind.CUSTOM

    def __init__(self, table: Mapping[int, Sequence], fallback: CharFamily | None = None) -> None:
        self.table = {}
        for n, row in table.items():
            n = int(n)
            row = list(row)
            if len(row) != n + 1:
                raise ConfigError(f"custom row for n={n} needs {n + 1} entries")
            if float(row[0]) != 1.0:
                raise ConfigError("custom rows must start with c_0 = 1")
            self.table[n] = row
        self.fallback = fallback
        self.name = "custom"

    def _row(self, n: int) -> list:
        if n in self.table:
            return self.table[n]
        raise ConfigError(f"custom family has no row for n={n}")

    def log_values(self, n, ls=None):
        _check_level(n)
        ls = _ls(n, ls)
        if n not in self.table and self.fallback is not None:
            return self.fallback.log_values(n, ls)
        row = np.array([float(x) for x in self._row(n)])[ls]
        with np.errstate(divide="ignore"):
            return np.sign(row).astype(int), np.log(np.abs(row))

    def exact_values(self, n, ls=None):
        ls = _ls(n, ls)
        if n not in self.table:
            return self.fallback.exact_values(n, ls) if self.fallback is not None else None
        row = self._row(n)
        if not all(isinstance(x, (int, Fraction)) for x in row):
            return None
        return [ExactValue.from_rational(row[int(l)]) for l in ls]

    def to_spec(self):
        out = {"kind": "custom", "table": {str(n): [str(x) for x in r] for n, r in self.table.items()}}
        if self.fallback is not None:
            out["fallback"] = self.fallback.to_spec()
        return out

    def __repr__(self):
        return f"Custom({sorted(self.table)})"


# ---------------------------------------------------------------------------
# operations


def char_numbers(family: CharFamily, n: int) -> np.ndarray:
    """``[c_0^n, ..., c_n^n]`` as floats; raises if some ``c_l^n`` vanishes."""
    signs, logs = family.log_values(n)
    zero = [int(l) for l in np.nonzero(signs == 0)[0]]
    if zero:
        raise SingularityError(f"{family!r} has c_l^{n} = 0 for l in {zero}")
    with np.errstate(over="ignore", under="ignore"):
        return signs * np.exp(logs)


def dual(family: CharFamily) -> CharFamily:
    """The dual family; ``dual(dual(F))`` returns ``F`` itself."""
    if isinstance(family, DualOf):
        return family.inner
    return DualOf(family)


def counterexample_family(a, anti: bool = False) -> CharFamily:
    """Poisson-type family that fails to localize classically at ``r = 1/2``.

    ``a`` is a Legendre-coefficient source: a ``TestFunction`` (preferably one
    with high-precision coefficients) or a plain coefficient array.
    """
    fam = Counterexample(a, anti=anti)
    _coeff_logs(a, 1)  # fail fast on an unusable source
    return fam


# ---------------------------------------------------------------------------
# classification


class Verdict(str, enum.Enum):
    YES = "yes"
    NO = "no"
    INCONCLUSIVE = "inconclusive"

    def __bool__(self) -> bool:
        return self is Verdict.YES

    def to_json(self):
        return {Verdict.YES: True, Verdict.NO: False}.get(self, "inconclusive")


@dataclass
class ClassificationReport:
    family: str
    n_grid: list[int]
    tol: float
    l_max: int
    isometric: Verdict
    positivity_bound: Verdict
    mapping_positive: Verdict
    positive_dual: Verdict
    limiting: Verdict
    poisson: Verdict
    anti_poisson: Verdict
    quasi_classical: Verdict
    limits: dict[int, float] = field(default_factory=dict)
    min_weight: dict[int, float] = field(default_factory=dict)
    min_dual_weight: dict[int, float] = field(default_factory=dict)
    evidence: dict[str, str] = field(default_factory=dict)

    def to_json(self) -> dict:
        props = (
            "isometric", "positivity_bound", "mapping_positive", "positive_dual",
            "limiting", "poisson", "anti_poisson", "quasi_classical",
        )
        out = {p: getattr(self, p).to_json() for p in props}
        out.update(
            family=self.family,
            n_grid=list(self.n_grid),
            tol=self.tol,
            l_max=self.l_max,
            limits={str(k): v for k, v in self.limits.items()},
            evidence=dict(self.evidence),
        )
        return out


def _tail_cauchy(seq: np.ndarray, tol: float) -> Verdict:
    """Cauchy test over the last three points of a sequence."""
    if seq.size < 3 or not np.all(np.isfinite(seq[-3:])):
        return Verdict.INCONCLUSIVE
    d1 = abs(seq[-2] - seq[-3])
    d2 = abs(seq[-1] - seq[-2])
    if d2 <= d1 and d2 < tol:
        return Verdict.YES
    mags = np.abs(seq[-3:])
    if mags[2] > mags[1] > mags[0] and d2 > d1 and d2 > 1.0:
        return Verdict.NO  # runaway growth
    return Verdict.INCONCLUSIVE


def _approaches(seq: np.ndarray, target: np.ndarray | float, tol: float) -> Verdict:
    """Last three |seq - target| strictly decreasing and the last below tol."""
    if seq.size < 3:
        return Verdict.INCONCLUSIVE
    dev = np.abs(seq[-3:] - target)
    if not np.all(np.isfinite(dev)):
        return Verdict.NO
    if dev[2] <= dev[1] <= dev[0] and dev[2] < tol:
        return Verdict.YES
    if dev[2] >= tol and abs(dev[2] - dev[1]) < tol and abs(dev[1] - dev[0]) < tol:
        return Verdict.NO  # settled, but away from the target
    return Verdict.INCONCLUSIVE


def _all(verdicts) -> Verdict:
    verdicts = list(verdicts)
    if any(v is Verdict.NO for v in verdicts):
        return Verdict.NO
    if all(v is Verdict.YES for v in verdicts):
        return Verdict.YES
    return Verdict.INCONCLUSIVE


def classify(
    family: CharFamily,
    n_grid: Sequence[int],
    tol: float = 1e-2,
    l_max: int = 3,
    weight_tol: float = 1e-10,
) -> ClassificationReport:
    """Evidence-based verdicts for the structural properties of a family.

    Per-level properties (isometric, positivity bound, mapping-positive,
    positive-dual) are checked at every grid level.  Asymptotic properties
    (limiting, Poisson, anti-Poisson, quasi-classical) look at ``c_l^n`` for
    ``1 <= l <= l_max`` over the tail of the grid; they are heuristics and may
    come back inconclusive.
    """
    grid = [int(n) for n in n_grid]
    if not grid or any(b <= a for a, b in zip(grid, grid[1:])) or grid[0] < 1:
        raise ConfigError("n_grid must be nonempty, positive and strictly ascending")
    iso, bound, mp, pd = [], [], [], []
    min_w, min_dw = {}, {}
    table: dict[int, np.ndarray] = {}
    for n in grid:
        signs, logs = family.log_values(n)
        with np.errstate(over="ignore", under="ignore"):
            c = signs * np.exp(logs)
        table[n] = c
        ls = np.arange(n + 1)
        iso.append(Verdict.YES if np.all(np.abs(np.abs(c) - 1) <= tol) else Verdict.NO)
        ok = np.all(logs[1:] <= 0.5 * np.log((n + 1) / (2 * ls[1:] + 1)) + 1e-12)
        bound.append(Verdict.YES if ok else Verdict.NO)
        if np.any(signs[1:] == 0):
            mp.append(Verdict.NO)
            pd.append(Verdict.NO)
            continue
        if np.all(np.isfinite(c)):
            w = weights_from_char_numbers(c)
            min_w[n] = float(w.min())
            mp.append(Verdict.YES if w.min() >= -weight_tol else Verdict.NO)
        else:
            mp.append(Verdict.NO)  # |c| beyond double range violates the bound anyway
        with np.errstate(over="ignore", under="ignore"):
            cd = signs * np.exp(-logs)
        if np.all(np.isfinite(cd)):
            wd = weights_from_char_numbers(cd)
            min_dw[n] = float(wd.min())
            pd.append(Verdict.YES if wd.min() >= -weight_tol else Verdict.NO)
        else:
            pd.append(Verdict.NO)

    evidence = {}
    limits: dict[int, float] = {}
    lim_v, poi_v, anti_v, qc_v = [], [], [], []
    for l in range(1, l_max + 1):
        ns = [n for n in grid if n >= l]
        seq = np.array([table[n][l] for n in ns])
        v = _tail_cauchy(seq, tol)
        lim_v.append(v)
        if v:
            limits[l] = float(seq[-1])
        poi_v.append(_approaches(seq, 1.0, tol))
        anti_v.append(_approaches(seq, (-1.0) ** l, tol))
        qc_v.append(_approaches(np.abs(seq), 1.0, tol))
        evidence[f"c_{l}"] = ", ".join(f"{x:.6g}" for x in seq[-3:])
    limiting = _all(lim_v)
    poisson = _all(poi_v)
    anti = _all(anti_v)
    if limiting and poisson is Verdict.INCONCLUSIVE and any(abs(limits[l] - 1) > tol for l in limits):
        poisson = Verdict.NO
    if limiting and anti is Verdict.INCONCLUSIVE and any(abs(limits[l] - (-1) ** l) > tol for l in limits):
        anti = Verdict.NO
    if limiting is Verdict.NO:
        poisson = anti = Verdict.NO
    return ClassificationReport(
        family=family.name,
        n_grid=grid,
        tol=tol,
        l_max=l_max,
        isometric=_all(iso),
        positivity_bound=_all(bound),
        mapping_positive=_all(mp),
        positive_dual=_all(pd),
        limiting=limiting,
        poisson=poisson,
        anti_poisson=anti,
        quasi_classical=_all(qc_v),
        limits=limits,
        min_weight=min_w,
        min_dual_weight=min_dw,
        evidence=evidence,
    )


# ---------------------------------------------------------------------------
# JSON family specs

_SHORTHAND = {
    "sw": {"kind": "sw", "alternate": False},
    "sw-standard": {"kind": "sw", "alternate": False},
    "sw-alternate": {"kind": "sw", "alternate": True},
    "berezin": {"kind": "berezin", "alternate": False},
    "berezin-alternate": {"kind": "berezin", "alternate": True},
    "toeplitz": {"kind": "toeplitz", "alternate": False},
    "toeplitz-alternate": {"kind": "toeplitz", "alternate": True},
    "upper-middle": {"kind": "middle", "lower": False},
    "lower-middle": {"kind": "middle", "lower": True},
}


def family_from_spec(spec: str | Mapping) -> CharFamily:
    """Build a family from a JSON spec (dict, JSON text, or shorthand name)."""
    if isinstance(spec, str):
        text = spec.strip()
        if text in _SHORTHAND:
            spec = _SHORTHAND[text]
        else:
            try:
                spec = json.loads(text)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"unknown family {text!r}") from exc
    if not isinstance(spec, Mapping) or "kind" not in spec:
        raise ConfigError(f"family spec needs a 'kind': {spec!r}")
    kind = spec["kind"]
    alt = bool(spec.get("alternate", False))
    if kind == "sw":
        return AlternateSW() if alt else StandardSW()
    if kind == "berezin":
        return AlternateBerezin() if alt else StandardBerezin()
    if kind == "toeplitz":
        return AlternateToeplitz() if alt else StandardToeplitz()
    if kind == "middle":
        return LowerMiddleState() if spec.get("lower", False) else UpperMiddleState()
    if kind == "dual":
        if "of" not in spec:
            raise ConfigError("dual spec needs 'of'")
        return dual(family_from_spec(spec["of"]))
    if kind == "kernel_weights":
        rule = spec.get("rule", "uniform")
        if isinstance(rule, list):
            rule = [Fraction(str(x)) for x in rule]
        return KernelWeightsFamily(rule)
    if kind == "custom":
        table = spec.get("table")
        if not isinstance(table, Mapping):
            raise ConfigError("custom spec needs a 'table' object {n: [c_0..c_n]}")
        parsed = {int(n): [Fraction(str(x)) for x in row] for n, row in table.items()}
        fb = spec.get("fallback")
        return Custom(parsed, family_from_spec(fb) if fb is not None else None)
    if kind == "counterexample":
        from .localization_lab import TestFunction

        return Counterexample(TestFunction.from_spec(spec.get("f", "exp")), anti=bool(spec.get("anti", False)))
    raise ConfigError(f"unknown family kind {kind!r}")
