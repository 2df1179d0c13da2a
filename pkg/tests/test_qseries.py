import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pilab.partitions import all_partitions
from pilab.qseries import (
    BivariateSeries,
    DivergentProduct,
    Factor,
    NonUnitConstantTerm,
    ProductSpec,
    TruncatedSeries,
    inverse_pochhammer,
    pochhammer_finite,
    pochhammer_infinite,
    product_series,
    series_add,
    series_div,
    series_invert,
    series_mul,
)

N = 12


def S(*c, order=N):
    return TruncatedSeries.from_coeffs(c, order)


coeff = st.integers(min_value=-20, max_value=20)
series = st.lists(coeff, min_size=1, max_size=N + 1).map(lambda c: TruncatedSeries.from_coeffs(c, N))
units = st.tuples(st.sampled_from([1, -1]), st.lists(coeff, max_size=N)).map(
    lambda t: TruncatedSeries.from_coeffs([t[0], *t[1]], N))


def test_add_examples():
    assert S(1, 1) + S(1, -1) == S(2)
    s = S(3, 0, 5)
    assert TruncatedSeries.zero(N) + s == s
    assert S(1, 0, 1) + S(0, 1, 1) == S(1, 1, 2)


def test_mul_examples():
    geo = S(*([1] * (N + 1)))
    assert S(1, -1) * geo == S(1)
    s = S(4, -2, 7)
    assert s * TruncatedSeries.one(N) == s
    assert S(1, 1) * S(1, 1) == S(1, 2, 1)


def test_invert_examples():
    assert series_invert(S(1, -1)) == S(*([1] * (N + 1)))
    assert series_invert(S(1)) == S(1)
    assert series_invert(S(-1, 1)) == S(*([-1] * (N + 1)))


@pytest.mark.parametrize("a0", [0, 2, -3])
def test_invert_rejects_non_units(a0):
    with pytest.raises(NonUnitConstantTerm):
        series_invert(S(a0, 1))


def test_mixed_orders_truncate_to_smaller():
    a = TruncatedSeries.from_coeffs([1, 1, 1, 1], 3)
    b = TruncatedSeries.from_coeffs([1, 2, 3, 4, 5, 6], 5)
    assert (a + b).order == 3
    assert series_mul(a, b).order == 3
    assert series_mul(a, b) == TruncatedSeries.from_coeffs([1, 3, 6, 10], 3)


def test_shift_and_dilate():
    s = S(1, 2, 3)
    assert s.shift(2) == S(0, 0, 1, 2, 3)
    assert s.shift(N + 1) == TruncatedSeries.zero(N)
    assert s.dilate(3) == S(1, 0, 0, 2, 0, 0, 3)
    with pytest.raises(ValueError):
        s.shift(-1)


def test_repr_is_readable():
    assert repr(TruncatedSeries.from_coeffs([1, -1, 0, 2], 3)) == "1 + -1*q + 2*q^3 + O(q^4)"


@settings(max_examples=60, deadline=None)
@given(series, series, series)
def test_ring_laws(a, b, c):
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == TruncatedSeries.zero(N)


@settings(max_examples=60, deadline=None)
@given(units, series)
def test_invert_is_two_sided(u, s):
    inv = series_invert(u)
    one = TruncatedSeries.one(N)
    assert u * inv == one
    assert inv * u == one
    assert series_div(s, u) * u == s


def test_pochhammer_examples():
    assert pochhammer_finite(1, 1, 1, 0, 6) == TruncatedSeries.one(6)
    assert pochhammer_finite(1, 1, 1, 2, 6) == TruncatedSeries.from_coeffs([1, -1, -1, 1], 6)
    # (-1; q^3)_2 = (1 + 1)(1 + q^3)
    assert pochhammer_finite(-1, 0, 3, 2, 6) == TruncatedSeries.from_coeffs([2, 0, 0, 2], 6)


def test_pochhammer_infinite_examples():
    # pentagonal numbers 1, 2, 5
    assert pochhammer_infinite(1, 1, 1, 5) == TruncatedSeries.from_coeffs([1, -1, -1, 0, 0, 1], 5)
    assert pochhammer_infinite(1, 2, 1, 1) == TruncatedSeries.one(1)
    assert pochhammer_infinite(-1, 1, 1, 3) == TruncatedSeries.from_coeffs([1, 1, 1, 2], 3)
    with pytest.raises(DivergentProduct):
        pochhammer_infinite(1, 0, 1, 5)


@pytest.mark.parametrize("sign,j,d", [(1, 1, 1), (-1, 2, 3), (1, 3, 8)])
def test_infinite_is_stable_under_extra_factors(sign, j, d):
    M = 30
    inf = pochhammer_infinite(sign, j, d, M)
    n = (M - j) // d + 1
    for extra in range(4):
        assert pochhammer_finite(sign, j, d, n + extra, M) == inf


def test_euler_pentagonal_theorem_to_80():
    M = 80
    expected = [0] * (M + 1)
    k = 0
    while True:
        done = True
        for kk in {k, -k}:
            e = kk * (3 * kk - 1) // 2
            if e <= M:
                expected[e] = (-1) ** abs(kk)
                done = False
        if done:
            break
        k += 1
    assert list(pochhammer_infinite(1, 1, 1, M)) == expected


def test_inverse_pochhammer_counts_partitions_with_few_parts():
    M = 30
    for n in range(7):
        s = inverse_pochhammer(1, 1, 1, n, M)
        for k in range(M + 1):
            assert s[k] == sum(1 for p in all_partitions(k) if len(p) <= n)


def test_product_series_examples():
    cap = product_series(ProductSpec.from_list(-1, (2, 3, 4, 6), 6), 6)
    for k in range(7):
        ok_parts = [p for p in all_partitions(k)
                    if len(set(p)) == len(p) and all(x % 6 not in (1, 5) for x in p)]
        assert cap[k] == len(ok_parts)
    gg = product_series(ProductSpec.from_list(1, (1, 4, 7), 8, denominator=True), 4)
    assert gg[4] == 2
    assert product_series(ProductSpec(), 5) == TruncatedSeries.one(5)


def test_factor_validation():
    with pytest.raises(DivergentProduct):
        Factor(1, 0, 3)
    with pytest.raises(ValueError):
        Factor(2, 1, 3)


def test_bivariate_basics():
    t = [[1], [0, 1], [0, 1, 0], [0, 1, 1, 0]]
    b = BivariateSeries.from_table(t, 3)
    assert b.coefficient(3, 2) == 1
    assert b.coefficient(3, 7) == 0
    assert b.table() == t
    assert list(b.at_x_equals_one()) == [1, 1, 1, 2]
    one = BivariateSeries.zero(3).add_term(0, TruncatedSeries.one(3))
    assert (b * one).table() == t
    assert (b + b).coefficient(3, 1) == 2
    # terms past the x bound are dropped rather than stored
    narrow = BivariateSeries.zero(3, x_bound=1)
    assert narrow.add_term(2, TruncatedSeries.one(3)) == narrow
