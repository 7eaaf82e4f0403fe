"""W- and dual W-quantization of J3-invariant functions, and their norms.

A J3-invariant operator at level ``n`` is ``F = sum_l chi_l e^(l, 0)`` with
``e^(l, 0) = sqrt(n+1) e(l, 0)``, which is orthonormal for the normalized
inner product ``<A|B> = tr(A^* B) / (n+1)``.  Quantizing ``f = sum a_l P_l``
gives

    chi_l = a_l / (c_l sqrt(2l+1))      (W-quantization)
    chi_l = a_l c_l / sqrt(2l+1)        (dual W-quantization),

so ``||F||^2 = sum |chi_l|^2`` can be compared with ``||f||^2 = sum |a_l|^2/(2l+1)``.
"""

from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .correspondence_catalog import CharFamily, Verdict
from .errors import DomainError, ResourceError, SingularityError
from .exact_spin_algebra import ExactValue, diag_table
from .localization_lab import PiRule, localization_record, test_function_from_spec
from .series import LegendreCoeffs

__all__ = [
    "J3Operator",
    "QuantizedSequence",
    "NormSequenceReport",
    "quantize",
    "normalized_norm",
    "operator_norm",
    "function_norm",
    "asymptotic_norm_report",
    "classical_expectation",
    "ExpectationReport",
    "MAX_DIAGONAL_N",
]

#: largest level at which operator diagonals are formed explicitly
MAX_DIAGONAL_N = 2048


@dataclass(frozen=True)
class J3Operator:
    """``sum_l chi[l] e^(l, 0)`` at level ``n``; ``exact`` optionally mirrors ``chi``."""

    n: int
    chi: np.ndarray
    exact: tuple | None = None

    def __post_init__(self) -> None:
        chi = np.asarray(self.chi)
        if chi.shape != (self.n + 1,):
            raise DomainError(f"need {self.n + 1} coupled coefficients, got {chi.shape}")
        object.__setattr__(self, "chi", chi)

    @classmethod
    def identity(cls, n: int) -> "J3Operator":
        chi = np.zeros(n + 1)
        chi[0] = 1.0
        return cls(n, chi, tuple(ExactValue.from_rational(int(l == 0)) for l in range(n + 1)))

    def diagonal(self) -> np.ndarray:
        """Matrix diagonal in the standard basis (these are the eigenvalues)."""
        if self.n > MAX_DIAGONAL_N:
            raise ResourceError(f"explicit diagonals are capped at n = {MAX_DIAGONAL_N}")
        return math.sqrt(self.n + 1) * (self.chi @ diag_table(self.n))

    def matrix(self) -> np.ndarray:
        return np.diag(self.diagonal())

    def symbol(self, c) -> LegendreCoeffs:
        """Legendre coefficients of the symbol for characteristic numbers ``c``."""
        c = np.asarray(c)
        ls = np.arange(self.n + 1)
        return LegendreCoeffs(c * self.chi * np.sqrt(2 * ls + 1))

    @property
    def is_hermitian(self) -> bool:
        return bool(np.all(np.isreal(self.chi)))


def _coefficient_logs(f, L: int):
    if isinstance(f, LegendreCoeffs) or isinstance(f, (list, tuple, np.ndarray)):
        a = np.zeros(L + 1)
        src = np.asarray(f.a if isinstance(f, LegendreCoeffs) else f, dtype=float)
        top = min(L, src.size - 1)
        a[: top + 1] = src[: top + 1]
        with np.errstate(divide="ignore"):
            return np.sign(a).astype(int), np.log(np.abs(a))
    f = test_function_from_spec(f)
    s, lg = f.log_legendre_coeffs(L)
    return np.asarray(s)[: L + 1], np.asarray(lg)[: L + 1]


def _exact_coefficients(f, L: int):
    if isinstance(f, LegendreCoeffs):
        ex = f.exact
        if ex is None:
            return None
        return tuple(ex[l] if l < len(ex) else Fraction(0) for l in range(L + 1))
    getter = getattr(f, "exact_coeffs", None)
    return getter(L) if getter is not None else None


def quantize(family: CharFamily, f, n: int, dual: bool = False, exact: bool = False) -> J3Operator:
    """``[W^j]^{-1}(f)`` (or the dual version) truncated to degree ``n``.

    ``f`` is a test function, a spec, a ``LegendreCoeffs`` or a plain vector
    of Legendre coefficients.  With ``exact=True`` rational coefficients and
    exact characteristic numbers give exact ``chi`` as well.
    """
    if n < 1:
        raise DomainError("n must be positive")
    ls = np.arange(n + 1)
    fs, flog = _coefficient_logs(f, n)
    cs, clog = family.log_values(n)
    if np.any(np.asarray(cs) == 0):
        raise SingularityError(f"{family!r} has a vanishing characteristic number at n={n}")
    sign = fs * np.asarray(cs)
    logs = flog + (clog if dual else -clog) - 0.5 * np.log(2 * ls + 1.0)
    with np.errstate(over="ignore", under="ignore", invalid="ignore"):
        chi = np.where(fs == 0, 0.0, sign * np.exp(logs))
    ex = None
    if exact:
        a = _exact_coefficients(f, n)
        c = family.exact_values(n)
        if a is None or c is None:
            raise DomainError("exact quantization needs rational coefficients and exact numbers")
        ex = tuple(
            ExactValue.from_rational(a[l]) * (c[l] if dual else 1 / c[l]) / ExactValue.sqrt_of(2 * l + 1)
            for l in range(n + 1)
        )
    return J3Operator(n, chi, ex)


def normalized_norm(F: J3Operator, exact: bool = False):
    """``sqrt(sum |chi_l|^2)``; an ``ExactValue`` when ``exact`` and available."""
    if exact:
        if F.exact is None:
            raise DomainError("operator carries no exact coefficients")
        return ExactValue.sqrt_of(sum((v.square for v in F.exact), Fraction(0)))
    return float(np.sqrt(np.sum(np.abs(F.chi) ** 2)))


def operator_norm(F: J3Operator) -> float:
    """Largest |eigenvalue| (the operator is diagonal in the standard basis)."""
    return float(np.max(np.abs(F.diagonal())))


def function_norm(f, L: int | None = None, exact: bool = False):
    """``||f||``: analytic when known, else ``sqrt(sum_{l<=L} |a_l|^2/(2l+1))``."""
    if L is not None:
        if exact:
            a = _exact_coefficients(f, L)
            if a is None:
                raise DomainError("no exact coefficients for this function")
            return ExactValue.sqrt_of(sum((Fraction(x) ** 2 / (2 * l + 1) for l, x in enumerate(a)), Fraction(0)))
        s, lg = _coefficient_logs(f, L)
        ls = np.arange(L + 1)
        with np.errstate(under="ignore"):
            terms = np.where(s == 0, 0.0, np.exp(2 * lg) / (2 * ls + 1))
        return math.sqrt(math.fsum(terms.tolist()))
    if isinstance(f, LegendreCoeffs):
        return math.sqrt(f.norm_sq())
    return test_function_from_spec(f).norm()


@dataclass
class QuantizedSequence:
    """Lazy ``n -> quantize(family, f, n, dual)``."""

    family: CharFamily
    f: object
    dual: bool = False
    _cache: dict = field(default_factory=dict, repr=False)

    def at(self, n: int) -> J3Operator:
        if n not in self._cache:
            self._cache[n] = quantize(self.family, self.f, n, self.dual)
        return self._cache[n]


@dataclass
class NormSequenceReport:
    """Norms along a grid, with tail statistics and a verdict."""

    values: list[tuple[int, float]]
    target: float
    verdict: str
    liminf: float
    limsup: float
    limit: float | None = None
    evidence: str = ""

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "norm"])
        for n, v in self.values:
            w.writerow([n, f"{v:.17g}"])
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "target_norm": self.target,
            "liminf": self.liminf,
            "limsup": self.limsup,
            "limit": self.limit,
            "evidence": self.evidence,
        }


def _norm_verdict(values: np.ndarray, target: float, tol: float, target_tol: float) -> tuple[str, float | None, str]:
    if values.size >= 4 and np.all(np.diff(values[-4:]) > 1):
        return "unbounded", None, "three successive grid steps each grew by more than 1"
    if values.size >= 3:
        tail = values[-3:]
        if np.all(np.abs(np.diff(tail)) < tol):
            return "converges", float(tail[-1]), f"tail Cauchy within {tol:g}"
        dev = np.abs(tail - target)
        if dev[2] <= dev[1] <= dev[0] and dev[2] < target_tol:
            return "converges", target, f"approaches ||f|| monotonically, last deviation {dev[2]:.3g}"
        if np.all(np.diff(values[-3:]) <= tol) and np.all(np.isfinite(values)):
            return "upper-bounded", None, "tail non-increasing"
    return "inconclusive", None, "tail neither settles nor grows steadily"


def asymptotic_norm_report(
    family: CharFamily,
    f,
    n_grid,
    dual: bool = False,
    tol: float = 1e-8,
    target_tol: float = 1e-3,
) -> NormSequenceReport:
    """Normalized norms of the quantized sequence over ``n_grid`` compared to ``||f||``.

    Verdicts: ``unbounded`` (three successive steps each grow by more than 1),
    ``converges`` (tail Cauchy within ``tol``, or monotone approach to
    ``||f||`` ending within ``target_tol``), ``upper-bounded``, or
    ``inconclusive``.
    """
    grid = [int(n) for n in n_grid]
    seq = QuantizedSequence(family, f, dual)
    vals = np.array([normalized_norm(seq.at(n)) for n in grid])
    target = function_norm(f)
    verdict, limit, evidence = _norm_verdict(vals, target, tol, target_tol)
    tail = vals[-3:]
    return NormSequenceReport(
        list(zip(grid, vals.tolist())),
        target,
        verdict,
        float(np.min(tail)),
        float(np.max(tail)),
        limit,
        evidence,
    )


@dataclass
class ExpectationReport:
    rows: list[dict]
    verdict: Verdict
    limit: float | None
    target: float

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "k", "expectation_re", "expectation_im", "target"])
        for r in self.rows:
            w.writerow([r["n"], r["k"], f"{r['value']:.17g}", "0", f"{r['target']:.17g}"])
        return buf.getvalue()


def classical_expectation(
    family: CharFamily,
    rule: PiRule,
    f,
    n_grid,
    anti: bool = False,
    tol: float = 5e-3,
    poisson: bool | None = None,
) -> ExpectationReport:
    """``<Pi_{k_n} | F~_n>`` along ``k_n = rule(n)``, with ``F~_n`` the dual quantization.

    The value equals the diagonal entry ``k_n`` of ``F~_n``; it is computed
    spectrally as ``sum_{l<=n} a_l * int P_l rho``.  The sequence is
    reported as converging (to its last value) when the last two successive
    differences shrink and the last is below ``tol``, and as not converging
    when both exceed ``tol``.
    """
    if poisson is False:
        warnings.warn("classical expectation is only meaningful for (anti-)Poisson families", UserWarning)
    f = test_function_from_spec(f)
    rows = []
    for n in n_grid:
        rec = localization_record(family, rule, f, int(n), anti=anti)
        rows.append({"n": rec["n"], "k": rec["k"], "value": rec["integral"], "target": rec["target"]})
    vals = np.array([r["value"] for r in rows])
    target = rows[-1]["target"]
    verdict = Verdict.INCONCLUSIVE
    limit = None
    if vals.size >= 3:
        d = np.abs(np.diff(vals[-3:]))
        if d[1] <= d[0] and d[1] < tol:
            verdict, limit = Verdict.YES, float(vals[-1])
        elif np.all(d > tol):
            verdict = Verdict.NO
    return ExpectationReport(rows, verdict, limit, target)
