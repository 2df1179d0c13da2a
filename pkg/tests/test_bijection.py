import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pilab.bijection import (
    BACKWARD,
    BIJECTION_FAMILIES,
    FORWARD,
    ConstraintViolation,
    InadmissibleMove,
    InvalidVariant,
    Pair,
    PairedPartition,
    ParseError,
    Singleton,
    Triple,
    UnsupportedFamily,
    backward_map,
    backward_move,
    base_partition,
    check_trace,
    decompose,
    forward_map,
    forward_move,
    fuzz_family,
    iter_triples,
    padded_partitions,
    parse_items,
    parse_parts,
    scheme_for,
    variants,
)
from pilab.generators import MULTISUMS
from pilab.partitions import ConstraintFamily as F
from pilab.partitions import Partition, iter_members, satisfies

CP1, CP2 = F("cp1"), F("cp2")
PAIRED = [t for t in BIJECTION_FAMILIES if scheme_for(F(t)).kind != "plain"]


def pp_of(fam, text, direction=FORWARD):
    items, anchor = parse_items(text)
    return PairedPartition(items, fam, direction, anchor)


# -- base partitions --------------------------------------------------------

def test_base_examples():
    b = base_partition(CP1, 2, 2)
    assert str(b) == "[2,4],[8,10],14,18" and b.weight == 56
    assert str(base_partition(CP1, 0, 0)) == "" and base_partition(CP1, 0, 0).weight == 0
    g = base_partition(F("gg22"), 1, 1)
    assert str(g) == "[1,3],5" and g.weight == 9
    assert str(base_partition(CP2, 0, 2, anchored=True)) == "!1,[5,7],[11,13]"
    assert str(base_partition(CP2, 0, 2)) == "[3,6],[9,12]"
    assert str(base_partition(F("cp1m2"), 0, 2)) == "[1,4],[7,10]"
    assert str(base_partition(F("gg21"), 0, 2)) == "[3,5],[7,9]"
    assert str(base_partition(F("ggo21"), 0, 2, anchored=True)) == "!2,[5,7],[9,11]"


def test_base_errors():
    with pytest.raises(InvalidVariant):
        base_partition(CP1, 1, 1, anchored=True)
    with pytest.raises(InvalidVariant):
        base_partition(F("rr1"), 0, 1)
    with pytest.raises(UnsupportedFamily):
        base_partition(F("schur"), 1, 0)
    with pytest.raises(ValueError):
        base_partition(CP1, -1, 0)


@pytest.mark.parametrize("tag", sorted(MULTISUMS))
def test_base_weights_match_multisum_exponents(tag):
    spec = MULTISUMS[tag]
    fam = F(tag)
    for n1 in range(6):
        for n2 in range(6):
            assert base_partition(fam, n1, n2).weight == spec.exponent(n1, n2)
            if spec.extra is not None:
                anchored = base_partition(fam, n1, n2, anchored=True).weight
                assert anchored == spec.exponent(n1, n2) + spec.extra(n1, n2)


@pytest.mark.parametrize("tag", BIJECTION_FAMILIES)
def test_bases_are_members_and_minimal(tag):
    fam = F(tag)
    n_max = 34
    best = {}
    for lam in iter_members(fam, n_max):
        pp = decompose(fam, lam, BACKWARD)
        key = (pp.n1, pp.n2, pp.anchor is not None)
        best[key] = min(best.get(key, lam.weight), lam.weight)
    for (n1, n2, anchored), w in best.items():
        b = base_partition(fam, n1, n2, anchored)
        assert b.is_valid()
        assert b.weight == w


# -- pairing ----------------------------------------------------------------

def test_decompose_examples():
    assert str(decompose(CP2, (3, 6, 9, 14, 18, 21), BACKWARD)) == "[3,6],9,14,[18,21]"
    assert str(decompose(CP1, (3, 6, 9, 12, 15, 20), FORWARD)) == "3,[6,9],[12,15],20"
    assert str(decompose(CP1, (3, 6, 9, 12, 15, 20), BACKWARD)) == "[3,6],[9,12],15,20"
    assert str(decompose(CP1, (), FORWARD)) == ""
    assert str(decompose(CP2, (1, 5, 7), BACKWARD)) == "!1,[5,7]"
    assert str(decompose(F("gg22"), (1, 3, 5, 9), FORWARD)) == "1,[3,5],9"
    assert str(decompose(F("gg22"), (1, 3, 5, 9), BACKWARD)) == "[1,3],5,9"
    with pytest.raises(ConstraintViolation):
        decompose(CP1, (2, 5), FORWARD)
    with pytest.raises(UnsupportedFamily):
        decompose(F("schur"), (1,), FORWARD)


def _alternative_pairings(parts, linked):
    """Every split into adjacent linked pairs and singletons, by brute force."""
    n = len(parts)

    def rec(i):
        if i == n:
            yield []
            return
        for rest in rec(i + 1):
            yield [("s", parts[i])] + rest
        if i + 1 < n and linked(parts[i], parts[i + 1]):
            for rest in rec(i + 2):
                yield [("p", parts[i], parts[i + 1])] + rest

    yield from rec(0)


def _valid_pairing(items, linked):
    # no singleton may be linked to a neighbouring part on both sides, nor to a singleton
    flat = []
    for it in items:
        flat.extend((it[0], v) for v in it[1:])
    for i, (kind, v) in enumerate(flat):
        if kind != "s":
            continue
        left = i > 0 and linked(flat[i - 1][1], v)
        right = i + 1 < len(flat) and linked(v, flat[i + 1][1])
        if left and right:
            return False
        if left and flat[i - 1][0] == "s" or right and flat[i + 1][0] == "s":
            return False
    return True


def _streak_position_ok(items, linked, direction):
    # an odd run keeps its singleton at the bottom going forward, at the top going backward
    flat = []
    for it in items:
        flat.extend((it[0], v) for v in it[1:])
    for i, (kind, v) in enumerate(flat):
        if kind != "s":
            continue
        left = i > 0 and linked(flat[i - 1][1], v)
        if direction == FORWARD and left:
            return False
        right = i + 1 < len(flat) and linked(v, flat[i + 1][1])
        if direction == BACKWARD and right:
            return False
    return True


@pytest.mark.parametrize("tag", PAIRED)
def test_decomposition_is_the_unique_admissible_pairing(tag):
    fam = F(tag)
    kind = scheme_for(fam).kind
    linked = (lambda a, b: b - a in (2, 3)) if kind == "cap" else (lambda a, b: b - a == 2)
    for lam in iter_members(fam, 30):
        pp = decompose(fam, lam, FORWARD)
        rest = lam.parts[1:] if pp.anchor is not None else lam.parts
        for direction in (FORWARD, BACKWARD):
            ok = [p for p in _alternative_pairings(rest, linked)
                  if _valid_pairing(p, linked) and _streak_position_ok(p, linked, direction)]
            assert len(ok) == 1
            got = decompose(fam, lam, direction)
            want = tuple(Pair(it[1], it[2]) if it[0] == "p" else Singleton(it[1]) for it in ok[0])
            assert got.items == want


@pytest.mark.parametrize("tag", PAIRED)
def test_pair_invariants(tag):
    fam = F(tag)
    kind = scheme_for(fam).kind
    r = {"cp1": 0, "cp2": 0, "cp0": 0, "cp1m1": 1, "cp1m2": 2}.get(tag)
    for lam in iter_members(fam, 30):
        for d in (FORWARD, BACKWARD):
            for p in decompose(fam, lam, d).pairs:
                if kind == "cap":
                    assert p.high - p.low in (2, 3) and (p.low + p.high) % 3 == r
                else:
                    assert p.high - p.low == 2


# -- single moves -----------------------------------------------------------

def test_forward_move_with_regroup():
    pp = pp_of(CP1, "[2,4],[8,10],15,20")
    new, tr = forward_move(pp, 1)
    assert str(new) == "[2,4],9,[12,15],20"
    assert tr.labels() == ["Ia", "regroup"]
    assert new.weight == pp.weight + 3


def test_forward_move_with_adjustment():
    pp = pp_of(CP1, "[2,4],9,[14,16],20")
    new, tr = forward_move(pp, 1)
    assert str(new) == "[2,4],9,14,[18,21]"
    assert tr.labels() == ["Ib", "adjust"]
    assert tr.steps[0].temporary and str(tr.steps[0].snapshot) == "[2,4],9,[15,18],20"


def test_gg_forward_move():
    new, tr = forward_move(pp_of(F("gg22"), "[1,3]"), 0)
    assert str(new) == "[3,5]" and tr.labels() == ["GG-a"]
    new, tr = forward_move(pp_of(F("gg22"), "[1,3],6"), 0)
    assert str(new) == "2,[5,7]" and tr.labels() == ["GG-b", "adjust"]


def test_blocked_smaller_pair_is_inadmissible():
    with pytest.raises(InadmissibleMove):
        forward_move(pp_of(CP1, "[2,4],[8,10]"), 0)
    with pytest.raises(InadmissibleMove):
        forward_move(pp_of(F("gg22"), "[1,3],[5,7]"), 0)


def test_backward_moves_on_second_example():
    pp = pp_of(CP2, "[3,6],9,14,[18,21]", BACKWARD)
    one, tr = backward_move(pp, 1)
    assert str(one) == "[3,6],9,[14,16],20"
    assert tr.labels() == ["I'b", "adjust"]
    two, tr = backward_move(one, 1)
    assert str(two) == "[3,6],[9,12],15,20"
    assert tr.labels() == ["II'a", "regroup"]
    with pytest.raises(InadmissibleMove):
        backward_move(two, 1)


def test_backward_move_at_base_is_terminal():
    with pytest.raises(InadmissibleMove):
        backward_move(pp_of(CP1, "[2,4]", BACKWARD), 0)
    with pytest.raises(IndexError):
        backward_move(pp_of(CP1, "[2,4]", BACKWARD), 3)


@pytest.mark.parametrize("tag", PAIRED)
def test_every_admissible_forward_move_is_undone(tag):
    fam = F(tag)
    step = scheme_for(fam).step
    for lam in iter_members(fam, 24):
        pp = decompose(fam, lam, FORWARD)
        for i in range(pp.n2):
            try:
                new, tr = forward_move(pp, i)
            except InadmissibleMove:
                continue
            assert new.weight == lam.weight + step
            assert new.is_valid()
            assert check_trace(tr, fam, +1) is None
            back, btr = backward_move(new, i)
            assert back.parts == lam.parts
            assert check_trace(btr, fam, -1) is None


# -- full maps --------------------------------------------------------------

WORKED_TRACE = [
    "[2,4],[8,10],14,18",
    "[2,4],[8,10],14,20",
    "[2,4],[8,10],15,20",
    "[2,4],[9,12],15,20",
    "[2,4],9,[12,15],20",
    "[2,4],9,[14,16],20",
    "[2,4],9,[15,18],20",
    "[2,4],9,14,[18,21]",
    "[3,6],9,14,[18,21]",
    "3,[6,9],14,[18,21]",
]


def test_worked_forward_example():
    lam, tr = forward_map(CP1, Triple.of((1, 2), (3, 9)))
    assert str(tr.end) == "3,[6,9],14,[18,21]"
    assert lam == Partition((3, 6, 9, 14, 18, 21)) and lam.weight == 71
    assert tr.snapshots() == WORKED_TRACE
    assert "IIa       [2,4],9,*[14,16]*,20" in tr.render().splitlines()


def test_worked_backward_examples():
    t, anchored, tr = backward_map(CP2, parse_parts("[3,6],9,14,[18,21]"))
    assert (t.mu.parts, t.eta.parts, anchored) == ((0, 1), (0, 6), False)
    beta = base_partition(CP2, t.n1, t.n2)
    assert str(beta) == "[3,6],[9,12],15,19" and beta.weight == 64
    t, _, _ = backward_map(CP1, (3, 6, 9, 14, 18, 21))
    assert (t.mu.parts, t.eta.parts) == ((1, 2), (3, 9))


def test_zero_triple_gives_base():
    for tag in BIJECTION_FAMILIES:
        fam = F(tag)
        n2 = 0 if scheme_for(fam).kind == "plain" else 2
        for anchored in variants(fam):
            lam, tr = forward_map(fam, Triple.of((0, 0, 0), (0,) * n2), anchored)
            assert lam.parts == base_partition(fam, 3, n2, anchored).parts
            assert tr.steps == ()
            t, a, _ = backward_map(fam, lam)
            assert t == Triple.of((0, 0, 0), (0,) * n2) and a == anchored


def test_single_gg_forward():
    lam, _ = forward_map(F("gg22"), Triple.of((), (4,)))
    assert lam.parts == (3, 5) and lam.weight == 8


def test_anchored_maps():
    lam, tr = forward_map(CP2, Triple.of((0, 2), (3,)), anchored=True)
    assert lam.parts[0] == 1
    t, a, _ = backward_map(CP2, lam)
    assert a and t == Triple.of((0, 2), (3,))


def test_triple_validation():
    with pytest.raises(ValueError):
        forward_map(CP1, Triple.of((), (2,)))
    with pytest.raises(ValueError):
        Triple.of((2, 1), ())
    with pytest.raises(InvalidVariant):
        forward_map(F("rr1"), Triple.of((), (0,)))
    with pytest.raises(ConstraintViolation):
        backward_map(CP1, (1, 2))


@pytest.mark.parametrize("tag", BIJECTION_FAMILIES)
def test_fuzz_up_to_30(tag):
    rep = fuzz_family(F(tag), 30, seed=7, samples=25)
    assert rep.failures == []
    assert rep.counts_match
    assert rep.checked_partitions == rep.checked_triples


def test_fuzz_trivial_range():
    rep = fuzz_family(CP1, 0)
    assert rep.ok and rep.checked_partitions == 1


def test_fuzz_is_deterministic_for_a_seed():
    a = fuzz_family(F("gg22"), 10, seed=3, samples=30).as_dict()
    b = fuzz_family(F("gg22"), 10, seed=3, samples=30).as_dict()
    assert a == b


triples = st.builds(
    lambda tag, mu, eta, anchored: (tag, mu, eta, anchored),
    st.sampled_from(PAIRED),
    st.lists(st.integers(0, 12), max_size=4).map(sorted),
    st.lists(st.integers(0, 6), max_size=3).map(sorted),
    st.booleans(),
)


@settings(max_examples=150, deadline=None)
@given(triples)
def test_random_triples_round_trip(data):
    tag, mu, eta_units, anchored = data
    fam = F(tag)
    anchored = anchored and len(variants(fam)) == 2
    sch = scheme_for(fam)
    t = Triple.of(mu, [sch.step * e for e in eta_units])
    lam, ftr = forward_map(fam, t, anchored)
    beta = base_partition(fam, t.n1, t.n2, anchored)
    assert lam.weight == beta.weight + t.weight
    assert lam.length == t.n1 + 2 * t.n2 + (1 if anchored else 0)
    assert satisfies(fam, lam)
    assert check_trace(ftr, fam, +1) is None
    t2, a2, btr = backward_map(fam, lam)
    assert (t2, a2) == (t, anchored)
    assert check_trace(btr, fam, -1) is None


# -- text format and helpers -----------------------------------------------

@pytest.mark.parametrize("text", ["[3,6],9,14,[18,21]", "!1,[5,7]", "", "4", "!2,5,[9,11],15"])
def test_format_round_trip(text):
    items, anchor = parse_items(text)
    assert PairedPartition(items, CP1, FORWARD, anchor).format() == text


def test_parse_accepts_trace_markers_and_plain_lists():
    assert parse_parts("[2,4],9,*[14,16]*,20") == (2, 4, 9, 14, 16, 20)
    assert parse_parts("3,6,9") == (3, 6, 9)


@pytest.mark.parametrize("bad", ["[3,6", "3,,4", "[a,b]", "5,!1", "6,3", "[1,2,3]"])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_parts(bad)


def test_padded_partitions():
    got = list(padded_partitions(2, 3))
    assert sorted(got) == [(0, 0), (0, 1), (0, 2), (0, 3), (1, 1), (1, 2)]
    assert list(padded_partitions(0, 5)) == [()]
    assert all(x % 4 == 0 for p in padded_partitions(3, 20, 4) for x in p)


def test_iter_triples_weights():
    for anchored, t, w in itertools.islice(iter_triples(CP2, 20), 200):
        assert w == base_partition(CP2, t.n1, t.n2, anchored).weight + t.weight <= 20
