"""Truncated exponential generating functions over exact rationals."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .graph import StructuraError

DEFAULT_ORDER = 10


class OrderMismatch(StructuraError):
    pass


class BadConstantTerm(StructuraError):
    pass


class OutOfRange(StructuraError):
    pass


@dataclass(frozen=True)
class Series:
    """c_0 + c_1 x + ... + c_N x^N, with c_n = |G_n|/n! for a class EGF."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if not self.coeffs:
            raise ValueError("a series needs at least the constant term")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int) -> Fraction:
        return self.coeffs[n]

    @classmethod
    def zero(cls, order: int = DEFAULT_ORDER) -> "Series":
        return cls((Fraction(0),) * (order + 1))

    @classmethod
    def one(cls, order: int = DEFAULT_ORDER) -> "Series":
        return cls((Fraction(1),) + (Fraction(0),) * order)

    @classmethod
    def x(cls, order: int = DEFAULT_ORDER) -> "Series":
        c = [Fraction(0)] * (order + 1)
        if order >= 1:
            c[1] = Fraction(1)
        return cls(tuple(c))

    @classmethod
    def exp_x(cls, order: int = DEFAULT_ORDER) -> "Series":
        return cls(tuple(Fraction(1, math.factorial(n)) for n in range(order + 1)))

    @classmethod
    def from_counts(cls, counts: Mapping[int, int] | Sequence[int], order: int) -> "Series":
        """EGF with c_n = counts[n]/n!; missing n above the data is an error."""
        get = counts.__getitem__
        return cls(tuple(Fraction(int(get(n)), math.factorial(n)) for n in range(order + 1)))

    def labeled_counts(self) -> list[Fraction]:
        return [c * math.factorial(n) for n, c in enumerate(self.coeffs)]

    def __add__(self, other: "Series") -> "Series":
        return series_add(self, other)

    def __sub__(self, other: "Series") -> "Series":
        _same(self, other)
        return Series(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, other: "Series") -> "Series":
        return series_mul(self, other)

    def scale(self, k: Fraction | int) -> "Series":
        return Series(tuple(k * c for c in self.coeffs))

    def to_json(self) -> str:
        return json.dumps([f"{c.numerator}/{c.denominator}" for c in self.coeffs])

    @classmethod
    def from_json(cls, text: str) -> "Series":
        data = json.loads(text)
        if not isinstance(data, list) or not data:
            raise ValueError("expected a non-empty JSON array of rational strings")
        return cls(tuple(Fraction(s) for s in data))


def _same(a: Series, b: Series) -> None:
    if a.order != b.order:
        raise OrderMismatch(f"orders differ: {a.order} vs {b.order}")


def series_add(a: Series, b: Series) -> Series:
    _same(a, b)
    return Series(tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))


def series_mul(a: Series, b: Series) -> Series:
    _same(a, b)
    n = a.order
    out = [Fraction(0)] * (n + 1)
    for i, x in enumerate(a.coeffs):
        if x:
            for j in range(n + 1 - i):
                out[i + j] += x * b.coeffs[j]
    return Series(tuple(out))


def series_exp(a: Series) -> Series:
    """exp(a) by the recurrence n e_n = sum_k k a_k e_{n-k}."""
    if a[0] != 0:
        raise BadConstantTerm("exp needs a zero constant term")
    n = a.order
    e = [Fraction(0)] * (n + 1)
    e[0] = Fraction(1)
    for m in range(1, n + 1):
        e[m] = sum((k * a[k] * e[m - k] for k in range(1, m + 1)), Fraction(0)) / m
    return Series(tuple(e))


def series_log(a: Series) -> Series:
    """log(a) for a_0 = 1, from a' = a (log a)'."""
    if a[0] != 1:
        raise BadConstantTerm("log needs constant term 1")
    n = a.order
    lg = [Fraction(0)] * (n + 1)
    for m in range(1, n + 1):
        acc = m * a[m]
        for k in range(1, m):
            acc -= k * lg[k] * a[m - k]
        lg[m] = acc / m
    return Series(tuple(lg))


def series_compose(f: Series, g: Series) -> Series:
    """f(g(x)) truncated; needs g_0 = 0."""
    _same(f, g)
    if g[0] != 0:
        raise BadConstantTerm("the inner series must have zero constant term")
    out = Series.zero(f.order)
    # Horner: f_N, then (acc * g + f_k) downwards
    for c in reversed(f.coeffs):
        out = series_mul(out, g)
        out = Series((out[0] + c,) + out.coeffs[1:])
    return out


def rooted_tree_series(order: int = DEFAULT_ORDER) -> Series:
    """T•(x): c_n = n^{n-1}/n!, the rooted labeled trees."""
    if order < 0:
        raise ValueError("order must be nonnegative")
    return Series((Fraction(0),) + tuple(Fraction(n ** (n - 1), math.factorial(n)) for n in range(1, order + 1)))


def tree_series(order: int = DEFAULT_ORDER) -> Series:
    """Unrooted labeled trees: c_n = n^{n-2}/n! (c_0 = 0)."""
    return Series((Fraction(0),) + tuple(Fraction(n ** (n - 2) if n >= 2 else 1, math.factorial(n)) for n in range(1, order + 1)))


def monomial(k: int, coeff: Fraction, order: int) -> Series:
    c = [Fraction(0)] * (order + 1)
    if k <= order:
        c[k] = Fraction(coeff)
    return Series(tuple(c))


@dataclass(frozen=True)
class RhoSolution:
    rho0: float
    rho2: float
    residual: float


def solve_rho2(rho0: float, tol: float = 1e-12) -> RhoSolution:
    """The unique x in (0, 1] with x e^{-x} = rho0, for 0 < rho0 <= 1/e."""
    top = math.exp(-1.0)
    if not (rho0 > 0) or rho0 > top * (1 + 1e-15):
        raise OutOfRange(f"rho0 must lie in (0, 1/e], got {rho0}")
    if rho0 >= top:
        return RhoSolution(rho0, 1.0, abs(math.exp(-1.0) - rho0))

    def f(x: float) -> float:
        return x * math.exp(-x) - rho0

    lo, hi = 0.0, 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-6:
            break
    x = 0.5 * (lo + hi)
    for _ in range(50):
        d = (1 - x) * math.exp(-x)
        if d == 0:
            break
        nx = x - f(x) / d
        if not lo <= nx <= hi:
            break
        if nx == x:
            break
        x = nx
    if abs(f(x)) > tol:
        # Newton stalled; finish by bisection
        lo, hi = 0.0, 1.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if f(mid) < 0:
                lo = mid
            else:
                hi = mid
        x = 0.5 * (lo + hi)
    return RhoSolution(rho0, x, abs(f(x)))


@dataclass(frozen=True)
class SeriesValue:
    value: float
    last_term: float


def eval_series(a: Series, x: float) -> SeriesValue:
    """Partial sum at x >= 0 and the magnitude of its last nonzero term."""
    if x < 0:
        raise ValueError("x must be nonnegative")
    total = 0.0
    last = 0.0
    p = 1.0
    for c in a.coeffs:
        term = float(c) * p
        total += term
        if c:
            last = abs(term)
        p *= x
    return SeriesValue(total, last)


def h_bound(x: float, rho_d: float) -> float:
    """(e rho_D / x)^x, maximized at x = rho_D."""
    if x <= 0:
        raise ValueError("x must be positive")
    return (math.e * rho_d / x) ** x


def series_equal(a: Series, b: Series) -> bool:
    _same(a, b)
    return a.coeffs == b.coeffs


def first_difference(a: Series, b: Series) -> int | None:
    _same(a, b)
    for n, (x, y) in enumerate(zip(a.coeffs, b.coeffs)):
        if x != y:
            return n
    return None


def counts_series(counts: Iterable[int]) -> Series:
    counts = list(counts)
    return Series.from_counts(counts, len(counts) - 1)
