"""Truncated formal power series in q with exact integer coefficients.

Everything here works modulo q^(N+1).  Values are immutable; combining two
series of different orders truncates to the smaller one.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence


class NonUnitConstantTerm(ValueError):
    """Raised when inverting a series whose constant term is not +-1."""


class DivergentProduct(ValueError):
    """Raised for an infinite product with a factor (1 -+ q^0)."""


@dataclass(frozen=True)
class TruncatedSeries:
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("a truncated series needs at least the constant term")

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[int], order: int) -> TruncatedSeries:
        c = list(coeffs)[: order + 1]
        c.extend([0] * (order + 1 - len(c)))
        return cls(tuple(int(v) for v in c))

    @classmethod
    def zero(cls, order: int) -> TruncatedSeries:
        return cls((0,) * (order + 1))

    @classmethod
    def one(cls, order: int) -> TruncatedSeries:
        return cls.monomial(0, order)

    @classmethod
    def monomial(cls, exponent: int, order: int, coeff: int = 1) -> TruncatedSeries:
        c = [0] * (order + 1)
        if 0 <= exponent <= order:
            c[exponent] = coeff
        return cls(tuple(c))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i]

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def truncate(self, order: int) -> TruncatedSeries:
        if order >= self.order:
            return self
        return TruncatedSeries(self.coeffs[: order + 1])

    def __add__(self, other: TruncatedSeries) -> TruncatedSeries:
        return series_add(self, other)

    def __sub__(self, other: TruncatedSeries) -> TruncatedSeries:
        return series_add(self, -other)

    def __neg__(self) -> TruncatedSeries:
        return TruncatedSeries(tuple(-c for c in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, int):
            return TruncatedSeries(tuple(other * c for c in self.coeffs))
        return series_mul(self, other)

    __rmul__ = __mul__

    def shift(self, k: int) -> TruncatedSeries:
        """Multiply by q^k (k >= 0), keeping the order."""
        if k < 0:
            raise ValueError("negative shift")
        n = self.order
        if k > n:
            return TruncatedSeries.zero(n)
        return TruncatedSeries((0,) * k + self.coeffs[: n + 1 - k])

    def dilate(self, k: int) -> TruncatedSeries:
        """Substitute q -> q^k (k >= 1), keeping the order."""
        if k < 1:
            raise ValueError("dilation factor must be positive")
        n = self.order
        c = [0] * (n + 1)
        for i, v in enumerate(self.coeffs[: n // k + 1]):
            c[k * i] = v
        return TruncatedSeries(tuple(c))

    def is_nonnegative(self) -> bool:
        return all(c >= 0 for c in self.coeffs)

    def __repr__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                mono = "q" if i == 1 else f"q^{i}"
                terms.append(mono if c == 1 else f"{c}*{mono}")
        body = " + ".join(terms) if terms else "0"
        return f"{body} + O(q^{self.order + 1})"


def series_add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    n = min(a.order, b.order)
    return TruncatedSeries(tuple(a.coeffs[i] + b.coeffs[i] for i in range(n + 1)))


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    n = min(a.order, b.order)
    ac, bc = a.coeffs, b.coeffs
    out = [0] * (n + 1)
    # skip zero coefficients of a; products of sparse Pochhammer factors are common
    for i in range(n + 1):
        x = ac[i]
        if x == 0:
            continue
        for j in range(n + 1 - i):
            y = bc[j]
            if y:
                out[i + j] += x * y
    return TruncatedSeries(tuple(out))


def series_invert(a: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse modulo q^(N+1).

    Only unit constant terms are accepted so that the result keeps integer
    coefficients.
    """
    a0 = a.coeffs[0]
    if a0 not in (1, -1):
        raise NonUnitConstantTerm(f"constant term {a0} is not a unit")
    n = a.order
    ac = a.coeffs
    b = [0] * (n + 1)
    b[0] = a0  # 1/a0 == a0 for a0 = +-1
    for k in range(1, n + 1):
        s = 0
        for i in range(1, k + 1):
            if ac[i]:
                s += ac[i] * b[k - i]
        b[k] = -a0 * s
    return TruncatedSeries(tuple(b))


def series_div(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return series_mul(a, series_invert(b))


def pochhammer_finite(sign: int, j: int, d: int, n: int, N: int) -> TruncatedSeries:
    """(sign*q^j; q^d)_n = prod_{i<n} (1 - sign*q^(j+d*i)), truncated at q^N.

    ``sign=+1`` gives the usual (q^j; q^d)_n, ``sign=-1`` gives (-q^j; q^d)_n.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if n < 0:
        raise ValueError("n must be non-negative")
    return _pochhammer_cached(sign, j, d, n, N)


@lru_cache(maxsize=4096)
def _pochhammer_cached(sign: int, j: int, d: int, n: int, N: int) -> TruncatedSeries:
    c = [0] * (N + 1)
    c[0] = 1
    for i in range(n):
        e = j + d * i
        if e > N:
            if d > 0:
                break
            continue
        # in-place multiplication by (1 - sign*q^e), high to low
        if e == 0:
            c = [(1 - sign) * v for v in c]
            continue
        for t in range(N, e - 1, -1):
            c[t] -= sign * c[t - e]
    return TruncatedSeries(tuple(c))


def pochhammer_infinite(sign: int, j: int, d: int, N: int) -> TruncatedSeries:
    """(sign*q^j; q^d)_oo truncated at q^N."""
    if j <= 0:
        raise DivergentProduct(f"factor with offset {j} has no unit constant term")
    if d <= 0:
        raise ValueError("modulus must be positive")
    n = max(0, -(-(N - j) // d) + 1) if N >= j else 0
    return pochhammer_finite(sign, j, d, n, N)


@lru_cache(maxsize=4096)
def inverse_pochhammer(sign: int, j: int, d: int, n: int, N: int) -> TruncatedSeries:
    """1/(sign*q^j; q^d)_n, cached because multisums reuse denominators."""
    return series_invert(pochhammer_finite(sign, j, d, n, N))


@dataclass(frozen=True)
class Factor:
    """One infinite Pochhammer factor (sign*q^offset; q^modulus)_oo.

    With ``denominator`` set the factor divides instead of multiplies.
    """

    sign: int
    offset: int
    modulus: int
    denominator: bool = False

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if self.offset < 1:
            raise DivergentProduct(f"offset {self.offset} < 1")
        if self.modulus < 1:
            raise ValueError("modulus must be positive")


@dataclass(frozen=True)
class ProductSpec:
    factors: tuple[Factor, ...] = ()

    @classmethod
    def from_list(
        cls, sign: int, offsets: Sequence[int], modulus: int, denominator: bool = False
    ) -> ProductSpec:
        """(sign*q^a1, sign*q^a2, ...; q^modulus)_oo in list notation."""
        return cls(tuple(Factor(sign, a, modulus, denominator) for a in offsets))

    def __mul__(self, other: ProductSpec) -> ProductSpec:
        return ProductSpec(self.factors + other.factors)


def product_series(spec: ProductSpec, N: int) -> TruncatedSeries:
    out = TruncatedSeries.one(N)
    for f in spec.factors:
        p = pochhammer_infinite(f.sign, f.offset, f.modulus, N)
        out = series_mul(out, series_invert(p) if f.denominator else p)
    return out


@dataclass(frozen=True)
class BivariateSeries:
    """Series in q and x; ``rows[m]`` is the q-series coefficient of x^m."""

    rows: tuple[TruncatedSeries, ...]

    def __post_init__(self):
        if not self.rows:
            raise ValueError("need at least the x^0 row")
        n = self.rows[0].order
        if any(r.order != n for r in self.rows):
            raise ValueError("all rows must share one q-order")

    @classmethod
    def zero(cls, order: int, x_bound: int | None = None) -> BivariateSeries:
        m = order if x_bound is None else x_bound
        z = TruncatedSeries.zero(order)
        return cls((z,) * (m + 1))

    @classmethod
    def from_table(cls, table: Sequence[Sequence[int]], order: int, x_bound: int | None = None):
        """Build from c[n][m] counts."""
        M = order if x_bound is None else x_bound
        rows = []
        for m in range(M + 1):
            rows.append(
                TruncatedSeries.from_coeffs(
                    (table[n][m] if n < len(table) and m < len(table[n]) else 0
                     for n in range(order + 1)),
                    order,
                )
            )
        return cls(tuple(rows))

    @property
    def order(self) -> int:
        return self.rows[0].order

    @property
    def x_bound(self) -> int:
        return len(self.rows) - 1

    def coefficient(self, n: int, m: int) -> int:
        if m > self.x_bound or n > self.order:
            return 0
        return self.rows[m][n]

    def __add__(self, other: BivariateSeries) -> BivariateSeries:
        n = min(self.order, other.order)
        M = min(self.x_bound, other.x_bound)
        return BivariateSeries(tuple(series_add(self.rows[m].truncate(n), other.rows[m].truncate(n))
                                     for m in range(M + 1)))

    def __mul__(self, other: BivariateSeries) -> BivariateSeries:
        n = min(self.order, other.order)
        M = min(self.x_bound, other.x_bound)
        rows = [TruncatedSeries.zero(n) for _ in range(M + 1)]
        for i in range(M + 1):
            for j in range(M + 1 - i):
                rows[i + j] = rows[i + j] + self.rows[i].truncate(n) * other.rows[j].truncate(n)
        return BivariateSeries(tuple(rows))

    def add_term(self, m: int, s: TruncatedSeries) -> BivariateSeries:
        """Return self + x^m * s; terms beyond the x bound are dropped."""
        if m > self.x_bound:
            return self
        rows = list(self.rows)
        rows[m] = rows[m] + s
        return BivariateSeries(tuple(rows))

    def at_x_equals_one(self) -> TruncatedSeries:
        out = TruncatedSeries.zero(self.order)
        for r in self.rows:
            out = out + r
        return out

    def table(self) -> list[list[int]]:
        """c[n][m] for 0 <= m <= min(n, x_bound)."""
        return [[self.coefficient(n, m) for m in range(min(n, self.x_bound) + 1)]
                for n in range(self.order + 1)]
