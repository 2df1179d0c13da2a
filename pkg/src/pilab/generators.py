"""Series and product sides of the partition identities, as truncated series.

Multisums carry the part count in x.  Their exponents are quadratic forms in
the summation indices; each form is checked for positive definiteness and
coordinatewise growth when its MultisumSpec is built, which is what makes the
truncated double loops complete.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .partitions import ConstraintFamily, InvalidGordonParams, UnknownFamily
from .qseries import (
    BivariateSeries,
    Factor,
    ProductSpec,
    TruncatedSeries,
    inverse_pochhammer,
    pochhammer_finite,
    product_series,
    series_invert,
    series_mul,
)


class NonIntegralDivision(ArithmeticError):
    pass


class UnknownIdentity(ValueError):
    pass


@dataclass(frozen=True)
class Quadratic:
    """(A n1^2 + B n1 n2 + C n2^2 + D n1 + E n2 + F) / den over the lattice n1, n2 >= 0."""

    A: int
    B: int
    C: int
    D: int
    E: int
    F: int = 0
    den: int = 1

    def __call__(self, n1: int, n2: int) -> int:
        num = self.A * n1 * n1 + self.B * n1 * n2 + self.C * n2 * n2 + self.D * n1 + self.E * n2 + self.F
        q, r = divmod(num, self.den)
        if r:
            raise NonIntegralDivision(f"exponent {Fraction(num, self.den)} at ({n1}, {n2})")
        return q

    def check(self) -> None:
        if self.A <= 0 or 4 * self.A * self.C - self.B * self.B <= 0:
            raise ValueError(f"{self} is not positive definite")
        # strictly increasing in each index from (0, 0) on
        if self.B < 0 or self.A + self.D <= 0 or self.C + self.E <= 0:
            raise ValueError(f"{self} is not increasing on the lattice")


@dataclass(frozen=True)
class MultisumSpec:
    """sum_{n1,n2} q^Q x^(n1 + 2 n2) (1 + x q^L) / ((q;q)_n1 (q^d; q^d)_n2).

    ``extra`` is the linear form L of the anchored term, or None when there is
    no anchored variant.
    """

    family: str
    exponent: Quadratic
    modulus: int
    extra: Quadratic | None = None

    def __post_init__(self):
        self.exponent.check()


MULTISUMS = {
    "cp1": MultisumSpec("cp1", Quadratic(2, 6, 6, 0, 0), 3),
    "cp2": MultisumSpec("cp2", Quadratic(2, 6, 6, 1, 3), 3, Quadratic(0, 0, 0, 2, 3, 1)),
    "cp0": MultisumSpec("cp0", Quadratic(2, 6, 6, 0, 0), 3, Quadratic(0, 0, 0, 3, 6, 1)),
    "cp1m1": MultisumSpec("cp1m1", Quadratic(2, 6, 6, -1, -2), 3),
    "cp1m2": MultisumSpec("cp1m2", Quadratic(2, 6, 6, -1, -1), 3),
    "gg22": MultisumSpec("gg22", Quadratic(3, 8, 8, -1, 0, den=2), 4),
    "gg21": MultisumSpec("gg21", Quadratic(3, 8, 8, 3, 8, den=2), 4),
    "ggo21": MultisumSpec("ggo21", Quadratic(3, 8, 8, 3, 8, den=2), 4, Quadratic(0, 0, 0, 2, 4, 2)),
    "gge22": MultisumSpec("gge22", Quadratic(3, 8, 8, 1, 4, den=2), 4, Quadratic(0, 0, 0, 2, 4, 1)),
}

CAPPARELLI_FAMILIES = ("cp1", "cp2", "cp0", "cp1m1", "cp1m2")
GG_FAMILIES = ("gg22", "gg21", "ggo21", "gge22")


def _lattice(q: Quadratic, N: int):
    """Yield (n1, n2) with q(n1, n2) <= N; relies on Quadratic.check()."""
    n2 = 0
    while q(0, n2) <= N:
        n1 = 0
        while q(n1, n2) <= N:
            yield n1, n2
            n1 += 1
        n2 += 1


def evaluate_multisum(spec: MultisumSpec, N: int, x_bound: int | None = None) -> BivariateSeries:
    out = BivariateSeries.zero(N, x_bound)
    d = spec.modulus
    for n1, n2 in _lattice(spec.exponent, N):
        e = spec.exponent(n1, n2)
        denom = series_mul(inverse_pochhammer(1, 1, 1, n1, N), inverse_pochhammer(1, d, d, n2, N))
        m = n1 + 2 * n2
        out = out.add_term(m, denom.shift(e))
        if spec.extra is not None:
            e2 = e + spec.extra(n1, n2)
            if e2 <= N:
                out = out.add_term(m + 1, denom.shift(e2))
    return out


def capparelli_family_multisum(family: ConstraintFamily | str, N: int) -> BivariateSeries:
    tag = family if isinstance(family, str) else family.tag
    if tag not in CAPPARELLI_FAMILIES:
        raise UnknownFamily(f"{tag} is not a Capparelli-type family")
    # every member has parts >= 1 and pairwise gaps >= 2, so m <= n
    return evaluate_multisum(MULTISUMS[tag], N)


def gg_family_multisum(family: ConstraintFamily | str, N: int) -> BivariateSeries:
    tag = family if isinstance(family, str) else family.tag
    if tag not in GG_FAMILIES:
        raise UnknownFamily(f"{tag} is not a Gollnitz-Gordon-type family")
    return evaluate_multisum(MULTISUMS[tag], N)


def family_multisum(family: ConstraintFamily | str, N: int) -> BivariateSeries:
    """The multisum attached to any family that has one."""
    f = family if isinstance(family, ConstraintFamily) else ConstraintFamily.parse(family)
    if f.tag in MULTISUMS:
        return evaluate_multisum(MULTISUMS[f.tag], N)
    if f.tag == "gordon":
        return andrews_gordon_multisum(f.k, f.a, N)
    if f.tag == "rr1":
        return andrews_gordon_multisum(2, 2, N)
    if f.tag == "schur":
        return schur_series("a", N)
    if f.tag == "euler_distinct":
        return euler_distinct_series(N)
    raise UnknownFamily(f"no multisum for {f.name}")


def andrews_gordon_multisum(k: int, a: int, N: int) -> BivariateSeries:
    """sum q^(N1^2+...+N_{k-1}^2 + N_a+...+N_{k-1}) x^(N1+...+N_{k-1}) / prod (q;q)_{n_r}.

    Here N_r = n_r + ... + n_{k-1}.  Summation runs over the decreasing
    vectors N1 >= N2 >= ... >= N_{k-1} >= 0.
    """
    if k < 2 or not 1 <= a <= k:
        raise InvalidGordonParams(f"k={k}, a={a}")
    out = BivariateSeries.zero(N)
    r = k - 1

    def rec(prefix: list[int], bound: int, quad: int):
        if len(prefix) == r:
            Ns = prefix
            e = quad + sum(Ns[a - 1:])  # N_a .. N_{k-1}, 1-indexed
            if e > N:
                return
            ns = [Ns[i] - (Ns[i + 1] if i + 1 < r else 0) for i in range(r)]
            term = TruncatedSeries.one(N)
            for n in ns:
                term = series_mul(term, inverse_pochhammer(1, 1, 1, n, N))
            nonlocal out
            out = out.add_term(sum(Ns), term.shift(e))
            return
        v = 0
        while v <= bound and quad + v * v <= N:
            rec(prefix + [v], v, quad + v * v)
            v += 1

    # N1 is unbounded above except by the exponent
    v = 0
    while v * v <= N:
        rec([v], v, v * v)
        v += 1
    return out


def euler_distinct_series(N: int) -> BivariateSeries:
    """sum q^((n^2+n)/2) x^n / (q;q)_n."""
    out = BivariateSeries.zero(N)
    n = 0
    while n * (n + 1) // 2 <= N:
        out = out.add_term(n, inverse_pochhammer(1, 1, 1, n, N).shift(n * (n + 1) // 2))
        n += 1
    return out


def euler_series(which: int, N: int) -> TruncatedSeries:
    """The three equal forms of the distinct/odd parts generating function.

    1: sum q^((n^2+n)/2)/(q;q)_n, 2: (q^2;q^2)_oo / (q;q)_oo, 3: 1/(q;q^2)_oo.
    """
    if which == 1:
        return euler_distinct_series(N).at_x_equals_one()
    if which == 2:
        return product_series(ProductSpec((Factor(1, 2, 2), Factor(1, 1, 1, True))), N)
    if which == 3:
        return product_series(ProductSpec((Factor(1, 1, 2, True),)), N)
    raise ValueError(f"which must be 1, 2 or 3, got {which}")


def classical_gg_series(which: int, N: int) -> BivariateSeries:
    """sum q^(n^2 + 2(which==2)n) (-q;q^2)_n x^n / (q^2;q^2)_n."""
    if which not in (1, 2):
        raise ValueError("which must be 1 or 2")
    lin = 0 if which == 1 else 2
    out = BivariateSeries.zero(N)
    n = 0
    while n * n + lin * n <= N:
        num = pochhammer_finite(-1, 1, 2, n, N)
        term = series_mul(num, inverse_pochhammer(1, 2, 2, n, N))
        out = out.add_term(n, term.shift(n * n + lin * n))
        n += 1
    return out


def aag_capparelli_series(N: int) -> TruncatedSeries:
    """(-q^4;q^6)_oo (-q^2;q^6)_oo sum q^(6n^2-3n)/(q^3;q^3)_2n."""
    s = TruncatedSeries.zero(N)
    n = 0
    while 6 * n * n - 3 * n <= N:
        s = s + inverse_pochhammer(1, 3, 3, 2 * n, N).shift(6 * n * n - 3 * n)
        n += 1
    pref = product_series(ProductSpec((Factor(-1, 4, 6), Factor(-1, 2, 6))), N)
    return series_mul(pref, s)


def legendre3(a: int) -> int:
    """(a/3) as a Legendre symbol: 0, 1, -1 for residues 0, 1, 2."""
    return (0, 1, -1)[a % 3]


def sills_capparelli_series(N: int) -> TruncatedSeries:
    """sum_n sum_{j<=2n} q^(n^2) ((n-j+1)/3) / ((q;q)_{2n-j} (q;q)_j)."""
    s = TruncatedSeries.zero(N)
    n = 0
    while n * n <= N:
        for j in range(2 * n + 1):
            sym = legendre3(n - j + 1)
            if sym == 0:
                continue
            t = series_mul(inverse_pochhammer(1, 1, 1, 2 * n - j, N), inverse_pochhammer(1, 1, 1, j, N))
            s = s + t.shift(n * n) * sym
        n += 1
    return s


@lru_cache(maxsize=64)
def schur_a_polys(n_max: int, N: int) -> tuple[TruncatedSeries, ...]:
    """a_0..a_{n_max} from (1 - q^(3n)) a_n = (1 + q) a_{n-1} - q a_{n-2}.

    Division by (1 - q^(3n)) is done as a truncated-series division and the
    product is re-multiplied to confirm it reproduces the right-hand side.
    """
    one = TruncatedSeries.one(N)
    zero = TruncatedSeries.zero(N)
    one_plus_q = TruncatedSeries.from_coeffs([1, 1], N)
    q = TruncatedSeries.monomial(1, N)
    a = [one]
    for n in range(1, n_max + 1):
        prev2 = a[n - 2] if n >= 2 else zero
        rhs = one_plus_q * a[n - 1] - q * prev2
        divisor = one - TruncatedSeries.monomial(3 * n, N)
        an = series_mul(rhs, series_invert(divisor))
        if series_mul(an, divisor) != rhs:
            raise NonIntegralDivision(f"a_{n} does not divide out exactly")
        a.append(an)
    return tuple(a)


@lru_cache(maxsize=64)
def schur_alpha_polys(n_max: int, N: int) -> tuple[TruncatedSeries, ...]:
    """alpha_n = (1 + q) alpha_{n-1} - q (1 - q^(3n-3)) alpha_{n-2}."""
    one = TruncatedSeries.one(N)
    zero = TruncatedSeries.zero(N)
    one_plus_q = TruncatedSeries.from_coeffs([1, 1], N)
    q = TruncatedSeries.monomial(1, N)
    al = [one]
    for n in range(1, n_max + 1):
        prev2 = al[n - 2] if n >= 2 else zero
        fac = one - TruncatedSeries.monomial(3 * n - 3, N) if n >= 2 else zero
        al.append(one_plus_q * al[n - 1] - q * fac * prev2)
    return tuple(al)


SCHUR_EXPONENT = Quadratic(2, 6, 6, -1, -1)


def schur_series(which: str, N: int, q_squared: bool = False) -> BivariateSeries:
    """Recurrence-driven candidates for sum s(n, m) x^m q^n.

    ``which="a"`` uses a_n2(q)/(q;q)_n1, ``which="alpha"`` uses
    alpha_n2(q)/((q;q)_n1 (q^3;q^3)_n2).

    With ``q_squared`` the recurrence polynomials are evaluated at q^2 and
    the alpha denominator becomes (q^6;q^6)_n2.  The default follows the
    recurrences exactly as written, which does not reproduce s(n, m); the
    q^2 reading does (checked against the brute-force table in the tests).
    """
    if which not in ("a", "alpha"):
        raise ValueError("which must be 'a' or 'alpha'")
    pts = list(_lattice(SCHUR_EXPONENT, N))
    n2_max = max(n2 for _, n2 in pts)
    polys = schur_a_polys(n2_max, N) if which == "a" else schur_alpha_polys(n2_max, N)
    d = 2 if q_squared else 1
    out = BivariateSeries.zero(N)
    for n1, n2 in pts:
        t = series_mul(polys[n2].dilate(d), inverse_pochhammer(1, 1, 1, n1, N))
        if which == "alpha":
            t = series_mul(t, inverse_pochhammer(1, 3 * d, 3 * d, n2, N))
        out = out.add_term(n1 + 2 * n2, t.shift(SCHUR_EXPONENT(n1, n2)))
    return out


def gordon_product_spec(k: int, a: int) -> ProductSpec:
    """1/prod (1 - q^n) over n not congruent to 0, +-a mod 2k+1."""
    if k < 2 or not 1 <= a <= k:
        raise InvalidGordonParams(f"k={k}, a={a}")
    mod = 2 * k + 1
    return ProductSpec(tuple(Factor(1, j, mod, True) for j in range(1, mod) if j not in (a, mod - a)))


PRODUCT_SPECS = {
    "capparelli1": ProductSpec.from_list(-1, (2, 3, 4, 6), 6),
    "capparelli2": ProductSpec.from_list(-1, (1, 3, 5, 6), 6),
    "gg1": ProductSpec.from_list(1, (1, 4, 7), 8, denominator=True),
    "gg2": ProductSpec.from_list(1, (3, 4, 5), 8, denominator=True),
    "euler": ProductSpec((Factor(1, 1, 2, True),)),
}


def parse_identity(tag: str) -> tuple[str, int | None, int | None]:
    """Normalise identity tags; gordon takes the ``gordon-k-a`` form."""
    t = tag.strip().lower()
    if t.startswith("gordon"):
        try:
            f = ConstraintFamily.parse(t)
        except (UnknownFamily, InvalidGordonParams) as e:
            raise UnknownIdentity(tag) from e
        return "gordon", f.k, f.a
    if t in ("rr1", "rogers-ramanujan"):
        return "gordon", 2, 2
    if t in PRODUCT_SPECS:
        return t, None, None
    raise UnknownIdentity(tag)


def product_side(identity: str, N: int) -> TruncatedSeries:
    name, k, a = parse_identity(identity)
    if name == "gordon":
        return product_series(gordon_product_spec(k, a), N)
    return product_series(PRODUCT_SPECS[name], N)


__all__ = [
    "MULTISUMS", "MultisumSpec", "Quadratic", "NonIntegralDivision", "UnknownIdentity",
    "andrews_gordon_multisum", "capparelli_family_multisum", "gg_family_multisum",
    "family_multisum", "classical_gg_series", "aag_capparelli_series",
    "sills_capparelli_series", "schur_series", "schur_a_polys", "schur_alpha_polys",
    "product_side", "gordon_product_spec", "euler_series", "legendre3",
    "PRODUCT_SPECS", "parse_identity",
]
