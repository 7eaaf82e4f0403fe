"""Projector distributions, moments and localization tests.

For a projector ``Pi_k`` at level ``n`` the distribution ``rho`` on ``[-1, 1]``
is ``(n+1)/2`` times its symbol along the z-axis.  Since ``rho`` is a
polynomial of degree ``n``, every integral against it is computed spectrally:

    int P_l rho dz = (-1)^(k-1) c_l C^{jjl}_{m,-m,0} sqrt((n+1)/(2l+1))   (l <= n)

and ``int f rho dz = sum_{l<=n} a_l * (that moment)`` with ``a_l`` the Legendre
coefficients of ``f``.  No quadrature against ``rho`` is ever needed.
"""

from __future__ import annotations

import csv
import io
import json
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np
from numpy.polynomial import legendre as npleg

from .correspondence_catalog import (
    CharFamily,
    Verdict,
    _approaches,
    weights_from_char_numbers,
)
from .errors import ConfigError, DomainError, QuadratureError
from .exact_spin_algebra import ExactValue, cgc_diag_column, legendre_eval
from .series import LegendreCoeffs

__all__ = [
    "PiRule",
    "TestFunction",
    "LegendrePoly",
    "PolyCoeffs",
    "Exp",
    "RungePole",
    "NamedSmooth",
    "Reflected",
    "TruncationWarning",
    "PositivityWarning",
    "gauss_legendre_coeffs",
    "legendre_coeffs",
    "rho_legendre_moments",
    "moments",
    "moments_exact",
    "moment_verdict",
    "moment_sweep",
    "localization_integral",
    "localization_record",
    "localization_error",
    "localization_sweep",
    "edmonds_check",
    "mu_analytic_suite",
    "bound_check",
    "toeplitz_diagonal_ratio",
    "bernstein_parameter",
]


class TruncationWarning(UserWarning):
    """The Legendre series of the test function was cut where it still matters."""


class PositivityWarning(UserWarning):
    """A moment criterion was applied to a family that is not mapping-positive."""


# ---------------------------------------------------------------------------
# projector index rules


_RULES = ("round", "floor", "ceil", "centered")


@dataclass(frozen=True)
class PiRule:
    """``n -> k_n`` with ``k_n / n -> r``.

    ``round``: ``k = clamp(round(r n), 1, n+1)`` (default);  ``floor``/``ceil``
    likewise; ``centered``: ``k = round(r n) + 1``, i.e. ``m = j - round(r n)``,
    which hits ``m = 0`` exactly at ``r = 1/2`` for even ``n``.
    """

    r: float
    rule: str = "round"

    def __post_init__(self) -> None:
        if not 0 <= self.r <= 1:
            raise DomainError(f"r must lie in [0, 1], got {self.r}")
        if self.rule not in _RULES:
            raise DomainError(f"unknown rule {self.rule!r}; choose from {_RULES}")

    def k(self, n: int) -> int:
        x = self.r * n
        if self.rule == "floor":
            k = math.floor(x)
        elif self.rule == "ceil":
            k = math.ceil(x)
        else:
            k = math.floor(x + 0.5)
            if self.rule == "centered":
                k += 1
        return min(max(k, 1), n + 1)

    @property
    def z0(self) -> float:
        return 1 - 2 * self.r

    def __call__(self, n: int) -> int:
        return self.k(n)


# ---------------------------------------------------------------------------
# test functions


def bernstein_parameter(c: float) -> float:
    """``mu`` of the largest Bernstein ellipse avoiding a real pole at ``c``."""
    c = abs(c)
    if c <= 1:
        raise DomainError("pole must lie outside [-1, 1]")
    return c + math.sqrt(c * c - 1)


def gauss_legendre_coeffs(
    func: Callable[[np.ndarray], np.ndarray],
    L: int,
    tol: float = 1e-12,
    max_nodes: int = 1 << 14,
) -> np.ndarray:
    """``a_l = (2l+1)/2 int f P_l dz`` for ``l <= L`` by Gauss-Legendre quadrature.

    Starts with ``L + 32`` nodes and doubles until two successive node counts
    agree to ``tol`` on every normalized moment ``a_l / (2l+1)``, relative to
    ``max(1, sup|f|)`` (rounding noise grows with both).
    """
    nodes = L + 32
    odd = 2 * np.arange(L + 1) + 1.0
    scale = 1.0

    def attempt(m: int) -> np.ndarray:
        nonlocal scale
        x, w = npleg.leggauss(m)
        V = npleg.legvander(x, L)
        fx = func(x)
        scale = max(scale, float(np.max(np.abs(fx))))
        return V.T @ (w * fx) / 2

    prev = attempt(nodes)
    while True:
        nodes *= 2
        if nodes > max_nodes:
            raise QuadratureError(f"Legendre coefficients up to {L} did not settle by {max_nodes} nodes")
        cur = attempt(nodes)
        if np.max(np.abs(cur - prev)) <= tol * scale:
            return odd * cur
        prev = cur


class TestFunction:
    """A smooth function on ``[-1, 1]`` with access to its Legendre coefficients."""

    __test__ = False  # not a pytest class
    name = "f"

    def __call__(self, z):
        raise NotImplementedError

    def _coeffs(self, L: int) -> np.ndarray:
        return gauss_legendre_coeffs(self, L)

    def legendre_coeffs(self, L: int) -> np.ndarray:
        cache = self.__dict__.setdefault("_cache", {})
        if "a" not in cache or cache["a"].size <= L:
            cache["a"] = self._coeffs(max(L, 8))
        return cache["a"][: L + 1]

    def log_legendre_coeffs(self, L: int) -> tuple[np.ndarray, np.ndarray]:
        """Signs and ``ln|a_l|``; exact zeros get sign 0 and ``-inf``."""
        a = self.legendre_coeffs(L)
        with np.errstate(divide="ignore"):
            return np.sign(a).astype(int), np.log(np.abs(a))

    def series(self, L: int) -> LegendreCoeffs:
        return LegendreCoeffs(self.legendre_coeffs(L).copy())

    def norm(self) -> float:
        """``sqrt((1/2) int |f|^2 dz)``."""
        x, w = npleg.leggauss(512)
        return math.sqrt(float(np.sum(w * np.abs(self(x)) ** 2)) / 2)

    def reflected(self) -> "TestFunction":
        return Reflected(self)

    @property
    def degree(self) -> int | None:
        """Polynomial degree, or ``None`` for non-polynomials."""
        return None

    def to_spec(self) -> dict:
        raise NotImplementedError

    @staticmethod
    def from_spec(spec) -> "TestFunction":
        return test_function_from_spec(spec)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.to_spec()})"


class _Polynomial(TestFunction):
    exact: tuple[Fraction, ...] | None = None

    @property
    def degree(self) -> int:
        return len(self._a) - 1

    def __call__(self, z):
        return npleg.legval(z, self._a)

    def legendre_coeffs(self, L: int) -> np.ndarray:
        out = np.zeros(L + 1)
        top = min(L, self.degree)
        out[: top + 1] = self._a[: top + 1]
        return out

    def exact_coeffs(self, L: int) -> tuple[Fraction, ...] | None:
        if self.exact is None:
            return None
        return tuple(self.exact[l] if l < len(self.exact) else Fraction(0) for l in range(L + 1))

    def norm(self) -> float:
        ls = np.arange(self._a.size)
        return math.sqrt(float(np.sum(self._a**2 / (2 * ls + 1))))


class LegendrePoly(_Polynomial):
    """``P_l``."""

    def __init__(self, l: int) -> None:
        if l < 0:
            raise DomainError("degree must be nonnegative")
        self.l = int(l)
        self.exact = tuple(Fraction(int(i == l)) for i in range(l + 1))
        self._a = np.array([float(x) for x in self.exact])
        self.name = f"P{l}"

    def to_spec(self):
        return {"kind": "legendre", "l": self.l}


def _monomial_to_legendre(b: Sequence[Fraction]) -> list[Fraction]:
    # Horner in the Legendre basis, using z P_l = ((l+1) P_{l+1} + l P_{l-1}) / (2l+1)
    out: list[Fraction] = [Fraction(0)]
    for coef in reversed(list(b)):
        nxt = [Fraction(0)] * (len(out) + 1)
        for l, c in enumerate(out):
            if c:
                nxt[l + 1] += c * (l + 1) / (2 * l + 1)
                if l:
                    nxt[l - 1] += c * l / (2 * l + 1)
        nxt[0] += coef
        out = nxt
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


class PolyCoeffs(_Polynomial):
    """``sum b_k z^k`` from monomial coefficients (ascending powers)."""

    def __init__(self, coeffs: Sequence) -> None:
        coeffs = list(coeffs)
        if not coeffs:
            raise DomainError("need at least one coefficient")
        self.coeffs = coeffs
        if all(isinstance(c, (int, Fraction)) for c in coeffs):
            self.exact = tuple(_monomial_to_legendre([Fraction(c) for c in coeffs]))
            self._a = np.array([float(x) for x in self.exact])
        else:
            self.exact = None
            self._a = npleg.poly2leg(np.asarray(coeffs, dtype=float))
        self.name = "poly"

    def to_spec(self):
        return {"kind": "poly", "coeffs": [str(c) if isinstance(c, Fraction) else c for c in self.coeffs]}


class Exp(TestFunction):
    """``exp(s z)``."""

    def __init__(self, scale: float = 1.0) -> None:
        self.scale = float(scale)
        self.name = "exp" if self.scale == 1 else f"exp({self.scale:g}z)"

    def __call__(self, z):
        return np.exp(self.scale * np.asarray(z, dtype=float))

    def log_legendre_coeffs(self, L: int) -> tuple[np.ndarray, np.ndarray]:
        # a_l = (2l+1) sqrt(pi/(2s)) I_{l+1/2}(s); the ratios I_{v+1}/I_v come
        # from the backward recurrence, which is stable for this minimal solution
        s = abs(self.scale)
        ls = np.arange(L + 1)
        if s == 0:
            logs = np.full(L + 1, -np.inf)
            logs[0] = 0.0
            return (ls == 0).astype(int), logs
        top = L + 64 + int(2 * s)
        ratio = 0.0
        ratios = np.empty(L)
        for i in range(top, 0, -1):
            nu = i + 0.5
            ratio = 1.0 / (2 * nu / s + ratio)  # I_{nu}/I_{nu-1}
            if i <= L:
                ratios[i - 1] = ratio
        log_i0 = 0.5 * math.log(2 / (math.pi * s)) + s + math.log1p(-math.exp(-2 * s)) - math.log(2)
        log_i = log_i0 + np.concatenate([[0.0], np.cumsum(np.log(ratios))])
        logs = np.log(2 * ls + 1.0) + 0.5 * math.log(math.pi / (2 * s)) + log_i
        signs = np.ones(L + 1, dtype=int)
        if self.scale < 0:
            signs[1::2] = -1
        return signs, logs

    def legendre_coeffs(self, L: int) -> np.ndarray:
        s, lg = self.log_legendre_coeffs(L)
        return s * np.exp(lg)

    def norm(self) -> float:
        s = self.scale
        return 1.0 if s == 0 else math.sqrt(math.sinh(2 * s) / (2 * s))

    def to_spec(self):
        return {"kind": "exp", "scale": self.scale}


class RungePole(TestFunction):
    """``1 / (c - z)`` with a real pole ``|c| > 1``."""

    def __init__(self, c: float) -> None:
        c = float(c)
        if abs(c) <= 1:
            raise DomainError("pole must lie outside [-1, 1]")
        self.c = c
        self.name = f"pole({c:g})"

    @property
    def mu(self) -> float:
        return bernstein_parameter(self.c)

    def __call__(self, z):
        return 1.0 / (self.c - np.asarray(z, dtype=float))

    def log_legendre_coeffs(self, L: int) -> tuple[np.ndarray, np.ndarray]:
        # a_l = (2l+1) Q_l(c) (Heine); Q_l is the minimal solution of the
        # Legendre recurrence, so its ratios are computed backwards
        x = abs(self.c)
        mu = self.mu
        top = L + 64 + int(40 / math.log(mu))
        sigma = 1 / mu
        ratios = np.empty(L)
        for l in range(top, 0, -1):
            sigma = l / ((2 * l + 1) * x - (l + 1) * sigma)  # Q_l / Q_{l-1}
            if l <= L:
                ratios[l - 1] = sigma
        log_q = math.log(math.atanh(1 / x)) + np.concatenate([[0.0], np.cumsum(np.log(ratios))])
        ls = np.arange(L + 1)
        logs = np.log(2 * ls + 1.0) + log_q
        signs = np.ones(L + 1, dtype=int)
        if self.c < 0:
            signs = np.where(ls % 2 == 0, -1, 1)
        return signs, logs

    def legendre_coeffs(self, L: int) -> np.ndarray:
        s, lg = self.log_legendre_coeffs(L)
        return s * np.exp(lg)

    def norm(self) -> float:
        return 1 / math.sqrt(self.c**2 - 1)

    def to_spec(self):
        return {"kind": "pole", "c": self.c}


_NAMED: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "cos": np.cos,
    "sin3": lambda z: np.sin(3 * z),
    "gauss": lambda z: np.exp(-np.asarray(z) ** 2),
    "cosh": np.cosh,
    "logistic": lambda z: 1 / (1 + np.exp(-4 * np.asarray(z))),
}


class NamedSmooth(TestFunction):
    """A few analytic functions whose coefficients come from quadrature."""

    def __init__(self, name: str) -> None:
        if name not in _NAMED:
            raise ConfigError(f"unknown function {name!r}; known: {sorted(_NAMED)}")
        self.name = name
        self._f = _NAMED[name]

    def __call__(self, z):
        return self._f(np.asarray(z, dtype=float))

    def to_spec(self):
        return {"kind": "named", "name": self.name}


class Reflected(TestFunction):
    """``z -> f(-z)``; coefficients are those of ``f`` with odd signs flipped."""

    def __init__(self, inner: TestFunction) -> None:
        self.inner = inner
        self.name = f"{inner.name}(-z)"

    def __call__(self, z):
        return self.inner(-np.asarray(z, dtype=float))

    def legendre_coeffs(self, L: int) -> np.ndarray:
        a = np.array(self.inner.legendre_coeffs(L), dtype=float)
        a[1::2] *= -1
        return a

    def log_legendre_coeffs(self, L: int):
        s, lg = self.inner.log_legendre_coeffs(L)
        s = np.array(s)
        s[1::2] *= -1
        return s, lg

    def exact_coeffs(self, L: int):
        ex = getattr(self.inner, "exact_coeffs", lambda L: None)(L)
        if ex is None:
            return None
        return tuple(-v if i % 2 else v for i, v in enumerate(ex))

    @property
    def degree(self):
        return self.inner.degree

    def norm(self) -> float:
        return self.inner.norm()

    def reflected(self) -> TestFunction:
        return self.inner

    def to_spec(self):
        return {"kind": "reflected", "of": self.inner.to_spec()}


def test_function_from_spec(spec) -> TestFunction:
    """Parse ``"exp"``, ``"exp:2"``, ``"pole:3"``, ``"legendre:4"``, ``"poly:1,0,-1"``,
    a named function, a JSON object, or an existing ``TestFunction``."""
    if isinstance(spec, TestFunction):
        return spec
    if isinstance(spec, str):
        text = spec.strip()
        if text.startswith("{"):
            try:
                return test_function_from_spec(json.loads(text))
            except json.JSONDecodeError as exc:
                raise ConfigError(f"bad function spec {text!r}") from exc
        head, _, arg = text.partition(":")
        try:
            if head == "exp":
                return Exp(float(arg) if arg else 1.0)
            if head in ("pole", "runge"):
                return RungePole(float(arg))
            if head in ("legendre", "P"):
                return LegendrePoly(int(arg))
            if head == "poly":
                return PolyCoeffs([Fraction(x) for x in arg.split(",")])
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"bad function spec {text!r}") from exc
        if head in _NAMED:
            return NamedSmooth(head)
        raise ConfigError(f"unknown function spec {text!r}")
    if not isinstance(spec, Mapping) or "kind" not in spec:
        raise ConfigError(f"function spec needs a 'kind': {spec!r}")
    kind = spec["kind"]
    try:
        if kind == "exp":
            return Exp(float(spec.get("scale", 1.0)))
        if kind == "pole":
            return RungePole(float(spec["c"]))
        if kind == "legendre":
            return LegendrePoly(int(spec["l"]))
        if kind == "poly":
            return PolyCoeffs([Fraction(str(x)) for x in spec["coeffs"]])
        if kind == "named":
            return NamedSmooth(spec["name"])
        if kind == "reflected":
            return Reflected(test_function_from_spec(spec["of"]))
    except (KeyError, ValueError, TypeError) as exc:
        raise ConfigError(f"bad function spec {spec!r}") from exc
    raise ConfigError(f"unknown function kind {kind!r}")


def legendre_coeffs(f, L: int) -> LegendreCoeffs:
    """Legendre coefficients ``a_0..a_L`` of a test function (or a spec)."""
    f = test_function_from_spec(f)
    exact = getattr(f, "exact_coeffs", lambda L: None)(L)
    return LegendreCoeffs(np.array(f.legendre_coeffs(L), dtype=float), exact)


# ---------------------------------------------------------------------------
# moments of rho


def _check_k(n: int, k: int) -> None:
    if not 1 <= k <= n + 1:
        raise DomainError(f"k must lie in [1, {n + 1}], got {k}")


def _moment_logs(n: int, k: int, family: CharFamily, ls, mode: str = "auto"):
    ls = np.asarray(ls, dtype=int)
    cs, clog = family.log_values(n, ls)
    gs, glog = cgc_diag_column(n, k, ls, mode)
    sign = (-1) ** (k - 1) * np.asarray(cs) * gs
    logs = clog + glog + 0.5 * (math.log(n + 1) - np.log(2 * ls + 1.0))
    return sign, logs


def rho_legendre_moments(n: int, k: int, family: CharFamily, L: int | None = None, mode: str = "auto") -> np.ndarray:
    """``int P_l rho dz`` for ``l = 0..L`` (zero beyond ``n``), in closed form."""
    _check_k(n, k)
    L = n if L is None else L
    out = np.zeros(L + 1)
    top = min(L, n)
    sign, logs = _moment_logs(n, k, family, np.arange(top + 1), mode)
    with np.errstate(over="ignore", under="ignore"):
        out[: top + 1] = sign * np.exp(logs)
    return out


def moments(n: int, k: int, family: CharFamily) -> tuple[float, float]:
    """Mean and variance of ``rho`` from the first two characteristic numbers."""
    _check_k(n, k)
    a = k - 1
    c = family.values(n, [1, 2] if n >= 2 else [1])
    mu = c[0] * (n - 2 * a) / math.sqrt(n * (n + 2))
    s2 = 1 / 3 - mu * mu
    if n >= 2:
        q = (n - a) * (n - a - 1) - 4 * a * (n - a) + a * (a - 1)
        s2 += 2 * c[1] * q / (3 * math.sqrt((n - 1) * n * (n + 2) * (n + 3)))
    return mu, s2


def moments_exact(n: int, k: int, family: CharFamily) -> tuple[ExactValue, ExactValue]:
    """Exact mean and variance; needs exact numbers and commensurable terms."""
    _check_k(n, k)
    ex = family.exact_values(n, [1, 2] if n >= 2 else [1])
    if ex is None:
        raise DomainError(f"{family!r} has no exact characteristic numbers")
    a = k - 1
    mu = ex[0] * ExactValue.sqrt_of(Fraction((n - 2 * a) ** 2, n * (n + 2))) * (1 if n >= 2 * a else -1)
    s2 = ExactValue.from_rational(Fraction(1, 3)) - mu * mu
    if n >= 2:
        q = (n - a) * (n - a - 1) - 4 * a * (n - a) + a * (a - 1)
        term = ex[1] * ExactValue.sqrt_of(Fraction(4 * q * q, 9 * (n - 1) * n * (n + 2) * (n + 3)))
        s2 = s2 + (term if q >= 0 else -term)
    return mu, s2


def moment_verdict(mu_seq, sigma2_seq, z0: float, tol: float = 1e-2, positive: bool | None = None) -> Verdict:
    """Localization at ``z0`` from means and variances (Chebyshev argument).

    The criterion is only valid for probability distributions, so a warning
    is issued when ``positive`` is ``False``.
    """
    if positive is False:
        warnings.warn("family is not mapping-positive; the moment criterion does not apply", PositivityWarning)
    mu = np.asarray(mu_seq, dtype=float)
    s2 = np.asarray(sigma2_seq, dtype=float)
    v1 = _approaches(mu, z0, tol)
    v2 = _approaches(s2, 0.0, tol)
    if v1 is Verdict.YES and v2 is Verdict.YES:
        return Verdict.YES
    if Verdict.NO in (v1, v2):
        return Verdict.NO
    return Verdict.INCONCLUSIVE


def _is_mapping_positive(family: CharFamily, n: int, tol: float = 1e-10) -> bool | None:
    if n > 512:
        return None
    c = family.values(n)
    if not np.all(np.isfinite(c)):
        return False
    return bool(np.all(weights_from_char_numbers(c) >= -tol))


def moment_sweep(family: CharFamily, rule: PiRule, n_grid, anti: bool = False, tol: float = 1e-2) -> dict:
    """Means/variances along ``k_n = rule(n)`` and the resulting verdict."""
    rows = []
    for n in n_grid:
        k = rule.k(int(n))
        mu, s2 = moments(int(n), k, family)
        rows.append({"n": int(n), "k": k, "mu": mu, "sigma2": s2})
    z0 = -rule.z0 if anti else rule.z0
    positive = _is_mapping_positive(family, int(max(n_grid)))
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        verdict = moment_verdict([r["mu"] for r in rows], [r["sigma2"] for r in rows], z0, tol, positive)
    return {
        "rows": rows,
        "z0": z0,
        "verdict": verdict,
        "mapping_positive": positive,
        "warnings": [str(w.message) for w in caught],
    }


# ---------------------------------------------------------------------------
# localization


_NEGLIGIBLE = math.log(1e-18)


def localization_record(
    family: CharFamily,
    rule: PiRule | int,
    f,
    n: int,
    L: int | None = None,
    anti: bool = False,
    mode: str = "auto",
) -> dict:
    """``int f rho dz`` against the target ``f(z0)``, with diagnostics.

    Only modes whose bound ``|a_l c_l|`` (which dominates ``|a_l * moment_l|``)
    is above ``1e-18`` of the largest bound are evaluated.  If ``L < n`` the
    skipped part of the sum is bounded and reported as ``truncation``.
    """
    f = test_function_from_spec(f)
    if isinstance(rule, PiRule):
        k = rule.k(n)
        z0 = -rule.z0 if anti else rule.z0
    else:
        k = int(rule)
        z0 = (n - 2 * (k - 1)) / n * (-1 if anti else 1)
    _check_k(n, k)
    L = n if L is None else min(L, n)
    ls = np.arange(n + 1)
    fs, flog = f.log_legendre_coeffs(n)
    fs, flog = np.asarray(fs)[: n + 1], np.asarray(flog)[: n + 1]
    cs, clog = family.log_values(n)
    bound = flog + clog
    live = (fs != 0) & (np.asarray(cs) != 0)
    with np.errstate(over="ignore", under="ignore"):
        tail = float(np.sum(np.exp(bound[L + 1 :][live[L + 1 :]]))) if L < n else 0.0
    if tail > 1e-12:
        warnings.warn(f"Legendre tail beyond L={L} may contribute up to {tail:.3g}", TruncationWarning)
    keep = live & (ls <= L)
    if np.any(keep):
        top = np.max(bound[keep])
        keep &= bound >= _NEGLIGIBLE + max(0.0, top)
    sel = ls[keep]
    ms, mlog = _moment_logs(n, k, family, sel, mode)
    with np.errstate(over="ignore", under="ignore"):
        terms = fs[sel] * ms * np.exp(flog[sel] + mlog)
    integral = math.fsum(terms.tolist())
    target = float(f(z0))
    return {
        "n": n,
        "k": k,
        "z0": z0,
        "integral": integral,
        "target": target,
        "error": abs(integral - target),
        "terms": int(sel.size),
        "truncation": tail,
    }


def localization_integral(family, rule, f, n: int, L: int | None = None, anti: bool = False) -> float:
    return localization_record(family, rule, f, n, L, anti)["integral"]


def localization_error(family, rule, f, n: int, L: int | None = None, anti: bool = False) -> float:
    """``|int f rho dz - f(z0)|`` with ``z0 = 1 - 2r`` (``2r - 1`` if ``anti``)."""
    return localization_record(family, rule, f, n, L, anti)["error"]


def _monotone(errors, floor: float = 1e-13) -> bool:
    e = np.maximum(np.asarray(errors, dtype=float), floor)
    return bool(np.all(np.diff(e) <= 0))


@dataclass
class Sweep:
    """Rows of a convergence sweep plus summary flags."""

    rows: list[dict]
    label: str = ""

    def column(self, name: str) -> np.ndarray:
        return np.array([r[name] for r in self.rows])

    @property
    def errors(self) -> np.ndarray:
        return self.column("error")

    @property
    def improves(self) -> bool:
        e = self.errors
        return bool(e[-1] < e[0])

    @property
    def monotone(self) -> bool:
        return _monotone(self.errors)

    def to_csv(self, columns: Sequence[str]) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in self.rows:
            w.writerow([r[c] if isinstance(r[c], (int, np.integer, str)) else f"{r[c]:.17g}" for c in columns])
        return buf.getvalue()


def localization_sweep(family, rule: PiRule, f, n_grid, anti: bool = False) -> Sweep:
    f = test_function_from_spec(f)
    rows = [localization_record(family, rule, f, int(n), anti=anti) for n in n_grid]
    return Sweep(rows, f"{family.name} r={rule.r} f={f.name}")


def edmonds_check(l: int, rule: PiRule, n_grid, mode: str = "auto") -> Sweep:
    """Scaled diagonal CG coefficients against ``P_l(1 - 2r)``.

    Rows hold ``n``, ``k``, ``lhs = (-1)^(k-1) C^{jjl}_{m,-m,0} sqrt((n+1)/(2l+1))``,
    the target and the error; ``improves`` compares the last and first rows.
    """
    if l < 1:
        raise DomainError("l must be at least 1")
    target = float(legendre_eval(l, rule.z0))
    rows = []
    for n in n_grid:
        n = int(n)
        if n < l:
            raise DomainError(f"level {n} below degree {l}")
        k = rule.k(n)
        s, lg = cgc_diag_column(n, k, [l], mode)
        lhs = float((-1) ** (k - 1) * s[0] * math.exp(lg[0] + 0.5 * math.log((n + 1) / (2 * l + 1))))
        rows.append({"n": n, "k": k, "lhs": lhs, "target": target, "error": abs(lhs - target)})
    return Sweep(rows, f"edmonds l={l} r={rule.r}")


def mu_analytic_suite(family: CharFamily, mu: float, rule: PiRule, n_grid, poles=None, anti: bool = False) -> dict:
    """Localization against ``1/(c - z)`` for poles around Bernstein parameter ``mu``.

    By default the poles have Bernstein parameters ``0.8 mu``, ``mu`` and
    ``1.25 mu`` (the first clipped at 1.05).  Each entry reports its error
    sweep and whether it decreases.
    """
    if mu <= 1:
        raise DomainError("mu must exceed 1")
    if poles is None:
        mus = [max(1.05, 0.8 * mu), mu, 1.25 * mu]
        poles = [(m + 1 / m) / 2 for m in mus]
    out = []
    for c in poles:
        f = RungePole(c)
        sw = localization_sweep(family, rule, f, n_grid, anti)
        out.append(
            {
                "c": c,
                "mu": f.mu,
                "errors": sw.errors.tolist(),
                "decreasing": sw.monotone and sw.improves,
                "sweep": sw,
            }
        )
    return {"family": family.name, "mu": mu, "r": rule.r, "poles": out}


@dataclass
class BoundReport:
    holds: bool
    K: float
    log_K: float
    d: int
    checkpoints: list[tuple[int, float]] = field(default_factory=list)

    def __iter__(self):
        yield self.holds
        yield self.K


def bound_check(family: CharFamily, d: int, n_max: int, rtol: float = 1e-9) -> BoundReport:
    """Smallest ``K_d`` with ``|c_l^n| <= K_d prod_{t=1}^d (2(l-t)+1)`` for ``d+1 < l <= n <= n_max``.

    The bound "holds" when ``K_d`` over ``n <= n_max`` is no larger than over
    ``n <= n_max/2`` (up to ``rtol``); growth between the two is evidence
    against any such bound.
    """
    if d < 0:
        raise DomainError("d must be nonnegative")
    if n_max < d + 2:
        raise DomainError(f"n_max must exceed d+1 = {d + 1}")
    log_k = -math.inf
    half = max(d + 2, n_max // 2)
    checkpoints = []
    for n in range(d + 2, n_max + 1):
        ls = np.arange(d + 2, n + 1)
        _, clog = family.log_values(n, ls)
        poly = sum(np.log(2.0 * (ls - t) + 1) for t in range(1, d + 1)) if d else 0.0
        log_k = max(log_k, float(np.max(clog - poly)))
        if n in (half, n_max) or (n & (n - 1)) == 0:
            checkpoints.append((n, log_k))
    at_half = dict(checkpoints)[half]
    holds = log_k <= at_half + math.log1p(rtol)
    with np.errstate(over="ignore"):
        K = float(np.exp(log_k))
    return BoundReport(holds, K, log_k, d, checkpoints)


def toeplitz_diagonal_ratio(l: int) -> float:
    """``t_l^l / (2^(l+1/2) / (l pi)^(1/4))``, which tends to 1."""
    log_t = 0.5 * (math.lgamma(2 * l + 2) - math.lgamma(l + 1) - math.lgamma(l + 2))
    log_a = (l + 0.5) * math.log(2) - 0.25 * math.log(l * math.pi)
    return math.exp(log_t - log_a)
