"""Base partitions and pair moves for the Capparelli and Gollnitz-Gordon families.

A member of a family is split into *pairs* (two successive parts with gap
2 or 3 for Capparelli-type families, gap exactly 2 for Gollnitz-Gordon-type
ones) and *singletons*.  A partition with n2 pairs and n1 singletons is
reached from the minimal such partition (the base) by

* adding a weakly increasing mu to the singletons, largest first, then
* moving the i-th largest pair forward eta_i/step times, largest pair first,

where every forward move adds ``step`` (3 or 4) to the weight.  Backward
moves undo this in the reverse order and recover (n1, n2, mu, eta).

Runs of linked parts (consecutive multiples of 3, consecutive odd parts) are
paired from the top when moving forward and from the bottom otherwise.  The
pairing is recomputed after every move; a changed pairing is recorded as a
``regroup`` step.

Moves only look at gaps between parts, so one rule set serves every
Capparelli-type family and one serves every Gollnitz-Gordon-type family.
The families differ only in their base partitions and anchors: a fixed
smallest part (1 or 2) that never moves.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterator, Sequence, Union

from .partitions import ConstraintFamily, PaddedPartition, Partition, satisfies

FORWARD = "forward"
BACKWARD = "backward"


class ConstraintViolation(ValueError):
    pass


class InadmissibleMove(ValueError):
    pass


class InvalidVariant(ValueError):
    pass


class UnsupportedFamily(ValueError):
    pass


class ParseError(ValueError):
    pass


class BijectionError(AssertionError):
    """A well-formed input hit a state the construction says cannot occur."""


@dataclass(frozen=True)
class Pair:
    low: int
    high: int

    @property
    def parts(self) -> tuple[int, int]:
        return (self.low, self.high)

    def __str__(self) -> str:
        return f"[{self.low},{self.high}]"


@dataclass(frozen=True)
class Singleton:
    value: int

    @property
    def parts(self) -> tuple[int]:
        return (self.value,)

    def __str__(self) -> str:
        return str(self.value)


Item = Union[Pair, Singleton]


@dataclass(frozen=True)
class PairedPartition:
    items: tuple[Item, ...]
    family: ConstraintFamily
    direction: str = FORWARD
    anchor: int | None = None

    @property
    def parts(self) -> tuple[int, ...]:
        out = [] if self.anchor is None else [self.anchor]
        for it in self.items:
            out.extend(it.parts)
        return tuple(out)

    @property
    def weight(self) -> int:
        return sum(self.parts)

    @property
    def pairs(self) -> list[Pair]:
        return [it for it in self.items if isinstance(it, Pair)]

    @property
    def singletons(self) -> list[int]:
        return [it.value for it in self.items if isinstance(it, Singleton)]

    @property
    def n1(self) -> int:
        return len(self.singletons)

    @property
    def n2(self) -> int:
        return len(self.pairs)

    def partition(self) -> Partition:
        return Partition(self.parts)

    def is_valid(self) -> bool:
        p = self.parts
        return all(a <= b for a, b in zip(p, p[1:])) and satisfies(self.family, p)

    def format(self, focus: int | None = None) -> str:
        return format_items(self.items, self.anchor, focus)

    def __str__(self) -> str:
        return self.format()


def format_items(items: Sequence[Item], anchor: int | None = None, focus: int | None = None) -> str:
    out = [] if anchor is None else [f"!{anchor}"]
    for i, it in enumerate(items):
        s = str(it)
        out.append(f"*{s}*" if i == focus else s)
    return ",".join(out)


def parse_items(text: str) -> tuple[tuple[Item, ...], int | None]:
    """Parse ``!1,[5,7],11`` style text into items and an optional anchor."""
    s = text.replace(" ", "").replace("*", "")
    if not s:
        return (), None
    items: list[Item] = []
    anchor = None
    i = 0
    try:
        while i < len(s):
            if s[i] == "[":
                j = s.index("]", i)
                lo, hi = (int(v) for v in s[i + 1:j].split(","))
                items.append(Pair(lo, hi))
                i = j + 1
            else:
                j = s.find(",", i)
                j = len(s) if j < 0 else j
                tok = s[i:j]
                if tok.startswith("!"):
                    if anchor is not None or items:
                        raise ParseError(f"anchor must come first: {text!r}")
                    anchor = int(tok[1:])
                else:
                    items.append(Singleton(int(tok)))
                i = j
            if i < len(s):
                if s[i] != ",":
                    raise ParseError(f"expected ',' at {i} in {text!r}")
                i += 1
    except (ValueError, IndexError) as e:
        if isinstance(e, ParseError):
            raise
        raise ParseError(f"cannot parse {text!r}") from e
    return tuple(items), anchor


def parse_parts(text: str) -> tuple[int, ...]:
    items, anchor = parse_items(text)
    parts = [] if anchor is None else [anchor]
    for it in items:
        parts.extend(it.parts)
    if any(a > b for a, b in zip(parts, parts[1:])):
        raise ParseError(f"parts must be ascending: {text!r}")
    return tuple(parts)


# ---------------------------------------------------------------------------
# family schemes


@dataclass(frozen=True)
class Scheme:
    kind: str  # "cap", "gg" or "plain"
    step: int
    # (first pair low, pair gap, pair spacing, singleton offset past last pair, singleton gap)
    plain: tuple[int, int, int, int, int]
    anchored: tuple[int, int, int, int, int] | None = None
    anchor: int | None = None


_SCHEMES = {
    # pairs [6j-4, 6j-2], singletons 6n2+2, +4, ...
    "cp1": Scheme("cap", 3, (2, 2, 6, 2, 4)),
    "cp2": Scheme("cap", 3, (3, 3, 6, 3, 4), (5, 2, 6, 5, 4), 1),
    "cp0": Scheme("cap", 3, (2, 2, 6, 2, 4), (5, 2, 6, 5, 4), 1),
    "cp1m1": Scheme("cap", 3, (1, 2, 6, 1, 4)),
    "cp1m2": Scheme("cap", 3, (1, 3, 6, 1, 4)),
    "gg22": Scheme("gg", 4, (1, 2, 4, 1, 3)),
    "gg21": Scheme("gg", 4, (3, 2, 4, 3, 3)),
    "ggo21": Scheme("gg", 4, (3, 2, 4, 3, 3), (5, 2, 4, 5, 3), 2),
    "gge22": Scheme("gg", 4, (2, 2, 4, 2, 3), (4, 2, 4, 4, 3), 1),
    "euler_distinct": Scheme("plain", 0, (0, 0, 0, 1, 1)),
    "rr1": Scheme("plain", 0, (0, 0, 0, 1, 2)),
}

BIJECTION_FAMILIES = tuple(_SCHEMES)


def scheme_for(family: ConstraintFamily) -> Scheme:
    try:
        return _SCHEMES[family.tag]
    except KeyError:
        raise UnsupportedFamily(f"no base partitions and moves for {family.name}") from None


def has_anchored_variant(family: ConstraintFamily) -> bool:
    return scheme_for(family).anchor is not None


def base_partition(
    family: ConstraintFamily, n1: int, n2: int, anchored: bool = False
) -> PairedPartition:
    """Minimal-weight member with n2 pairs and n1 movable singletons."""
    if n1 < 0 or n2 < 0:
        raise ValueError("n1 and n2 must be non-negative")
    sch = scheme_for(family)
    if anchored and sch.anchored is None:
        raise InvalidVariant(f"{family.name} has no anchored base partition")
    if sch.kind == "plain" and n2:
        raise InvalidVariant(f"{family.name} has no pairs")
    first, gap, spacing, s_off, s_gap = sch.anchored if anchored else sch.plain
    items: list[Item] = []
    for j in range(n2):
        lo = first + spacing * j
        items.append(Pair(lo, lo + gap))
    start = spacing * n2 + s_off
    for i in range(n1):
        items.append(Singleton(start + s_gap * i))
    return PairedPartition(tuple(items), family, FORWARD, sch.anchor if anchored else None)


# ---------------------------------------------------------------------------
# pairing


def _linked(kind: str, a: int, b: int) -> bool:
    if kind == "cap":
        return b - a in (2, 3)
    if kind == "gg":
        return b - a == 2
    return False


def pair_up(parts: Sequence[int], kind: str, direction: str) -> tuple[Item, ...]:
    """Split ascending parts into pairs and singletons.

    Maximal runs of linked parts are paired from the top when moving forward
    and from the bottom otherwise; an odd run leaves its bottom (forward) or
    top (backward) part as a singleton.
    """
    items: list[Item] = []
    i = 0
    n = len(parts)
    while i < n:
        j = i
        while j + 1 < n and _linked(kind, parts[j], parts[j + 1]):
            j += 1
        run = parts[i:j + 1]
        odd = len(run) % 2
        if odd and direction == FORWARD:
            items.append(Singleton(run[0]))
            run = run[1:]
        tail = None
        if odd and direction != FORWARD:
            tail = run[-1]
            run = run[:-1]
        items.extend(Pair(run[t], run[t + 1]) for t in range(0, len(run), 2))
        if tail is not None:
            items.append(Singleton(tail))
        i = j + 1
    return tuple(items)


def _split_anchor(family: ConstraintFamily, parts: Sequence[int]) -> tuple[int | None, tuple[int, ...]]:
    sch = scheme_for(family)
    if sch.anchor is not None and parts and parts[0] == sch.anchor:
        return sch.anchor, tuple(parts[1:])
    return None, tuple(parts)


def decompose(family: ConstraintFamily, p: Partition | Sequence[int], direction: str) -> PairedPartition:
    parts = tuple(p.parts if isinstance(p, Partition) else p)
    if direction not in (FORWARD, BACKWARD):
        raise ValueError(f"direction must be {FORWARD!r} or {BACKWARD!r}")
    if not satisfies(family, parts):
        raise ConstraintViolation(f"{parts} is not in {family.name}")
    sch = scheme_for(family)
    anchor, rest = _split_anchor(family, parts)
    return PairedPartition(pair_up(rest, sch.kind, direction), family, direction, anchor)


def _regrouped(pp: PairedPartition, direction: str) -> PairedPartition:
    sch = scheme_for(pp.family)
    rest = pp.parts[1:] if pp.anchor is not None else pp.parts
    return PairedPartition(pair_up(rest, sch.kind, direction), pp.family, direction, pp.anchor)


# ---------------------------------------------------------------------------
# traces


@dataclass(frozen=True)
class Step:
    label: str
    snapshot: PairedPartition
    focus: int | None = None
    temporary: bool = False

    def render(self) -> str:
        return f"{self.label:<9} {self.snapshot.format(self.focus)}"


MOVE_LABELS = {"Ia", "IIa", "Ib", "IIb", "I'a", "II'a", "I'b", "II'b", "GG-a", "GG-b", "GG'-a", "GG'-b"}


@dataclass(frozen=True)
class MoveTrace:
    start: PairedPartition
    steps: tuple[Step, ...] = ()

    @property
    def end(self) -> PairedPartition:
        return self.steps[-1].snapshot if self.steps else self.start

    def __add__(self, other: MoveTrace) -> MoveTrace:
        return MoveTrace(self.start, self.steps + other.steps)

    def snapshots(self) -> list[str]:
        return [self.start.format()] + [s.snapshot.format() for s in self.steps]

    def labels(self) -> list[str]:
        return [s.label for s in self.steps]

    def render(self) -> str:
        lines = [f"{'start':<9} {self.start.format()}"]
        lines.extend(s.render() for s in self.steps)
        return "\n".join(lines)


def _focus_of(items: Sequence[Item], target: Item) -> int | None:
    try:
        return list(items).index(target)
    except ValueError:
        return None


def _finish(
    pp: PairedPartition, new_items: list[Item], moved: Item, label: str,
    temp: list[Item] | None, temp_moved: Item | None, direction: str,
) -> tuple[PairedPartition, MoveTrace]:
    steps: list[Step] = []
    mk = lambda its: PairedPartition(tuple(its), pp.family, direction, pp.anchor)  # noqa: E731
    if temp is not None:
        steps.append(Step(label, mk(temp), _focus_of(temp, temp_moved), temporary=True))
        snap = mk(new_items)
        steps.append(Step("adjust", snap, _focus_of(new_items, moved)))
    else:
        snap = mk(new_items)
        steps.append(Step(label, snap, _focus_of(new_items, moved)))
    if not snap.is_valid():
        raise InadmissibleMove(f"{label} on {pp} leaves {snap}, outside {pp.family.name}")
    regrouped = _regrouped(snap, direction)
    if regrouped.items != snap.items:
        # the moved pair keeps its rank among pairs
        rank = [it for it in snap.items if isinstance(it, Pair)].index(moved) if isinstance(moved, Pair) else None
        f = None
        if rank is not None:
            f = _focus_of(regrouped.items, regrouped.pairs[rank])
        steps.append(Step("regroup", regrouped, f))
        snap = regrouped
    return snap, MoveTrace(pp, tuple(steps))


def _canonical(pp: PairedPartition, direction: str) -> tuple[PairedPartition, list[Step]]:
    c = _regrouped(pp, direction)
    if c.items == pp.items:
        return PairedPartition(pp.items, pp.family, direction, pp.anchor), []
    return c, [Step("regroup", c)]


def _pair_position(pp: PairedPartition, pair_index: int) -> int:
    pos = [i for i, it in enumerate(pp.items) if isinstance(it, Pair)]
    if not 0 <= pair_index < len(pos):
        raise IndexError(f"pair index {pair_index} out of range for {len(pos)} pairs")
    return pos[pair_index]


def forward_move(pp: PairedPartition, pair_index: int) -> tuple[PairedPartition, MoveTrace]:
    """One forward move on the pair of rank ``pair_index`` (0 = smallest).

    The partition is first paired in forward mode.  Weight goes up by the
    family step; adjustments and regroupings keep the weight.
    """
    sch = scheme_for(pp.family)
    pp0 = pp
    pp, pre = _canonical(pp, FORWARD)
    pos = _pair_position(pp, pair_index)
    items = list(pp.items)
    P = items[pos]
    lo, hi = P.low, P.high
    nxt_item = items[pos + 1] if pos + 1 < len(items) else None
    nxt = nxt_item.parts[0] if nxt_item is not None else None
    free_single = isinstance(nxt_item, Singleton)
    temp = temp_moved = None

    if sch.kind == "cap":
        if hi - lo == 2:
            if nxt is None or nxt >= hi + 5:
                label, moved = "Ia", Pair(lo + 1, hi + 2)
                items[pos] = moved
            elif nxt == hi + 4 and free_single:
                label, temp_moved = "Ib", Pair(lo + 1, hi + 2)
                temp = items[:pos] + [temp_moved] + items[pos + 1:]
                moved = Pair(lo + 4, hi + 5)
                items[pos:pos + 2] = [Singleton(lo), moved]
            else:
                raise InadmissibleMove(f"pair {P} in {pp} is blocked by {nxt_item}")
        elif hi - lo == 3:
            if nxt is None or nxt >= hi + 5:
                label, moved = "IIa", Pair(lo + 2, hi + 1)
                items[pos] = moved
            elif nxt == hi + 4 and free_single:
                label, temp_moved = "IIb", Pair(lo + 2, hi + 1)
                temp = items[:pos] + [temp_moved] + items[pos + 1:]
                moved = Pair(lo + 5, hi + 4)
                items[pos:pos + 2] = [Singleton(lo + 1), moved]
            else:
                raise InadmissibleMove(f"pair {P} in {pp} is blocked by {nxt_item}")
        else:
            raise BijectionError(f"malformed pair {P}")
    elif sch.kind == "gg":
        if nxt is None or nxt >= hi + 4:
            label, moved = "GG-a", Pair(lo + 2, hi + 2)
            items[pos] = moved
        elif nxt == hi + 3 and free_single:
            label, temp_moved = "GG-b", Pair(lo + 2, hi + 2)
            temp = items[:pos] + [temp_moved] + items[pos + 1:]
            moved = Pair(lo + 4, hi + 4)
            items[pos:pos + 2] = [Singleton(lo + 1), moved]
        else:
            raise InadmissibleMove(f"pair {P} in {pp} is blocked by {nxt_item}")
    else:
        raise UnsupportedFamily(f"{pp.family.name} has no pair moves")

    new, trace = _finish(pp, items, moved, label, temp, temp_moved, FORWARD)
    return new, MoveTrace(pp0, tuple(pre) + trace.steps)


def _base_pair(pp: PairedPartition, pair_index: int) -> Pair:
    base = base_partition(pp.family, 0, pair_index + 1, pp.anchor is not None)
    return base.pairs[pair_index]


def backward_move(pp: PairedPartition, pair_index: int) -> tuple[PairedPartition, MoveTrace]:
    """One backward move on the pair of rank ``pair_index`` (0 = smallest).

    Raises InadmissibleMove once the pair sits at its base position.
    """
    sch = scheme_for(pp.family)
    pp0 = pp
    pp, pre = _canonical(pp, BACKWARD)
    pos = _pair_position(pp, pair_index)
    items = list(pp.items)
    P = items[pos]
    lo, hi = P.low, P.high
    if P == _base_pair(pp, pair_index):
        raise InadmissibleMove(f"pair {P} is already at its base position")
    prev_item = items[pos - 1] if pos > 0 else None
    prev = prev_item.parts[-1] if prev_item is not None else None
    free_single = isinstance(prev_item, Singleton)
    temp = temp_moved = None

    if sch.kind == "cap":
        if hi - lo == 3:
            if prev is None or prev <= lo - 5:
                label, moved = "I'a", Pair(lo - 1, hi - 2)
                items[pos] = moved
            elif prev == lo - 4 and free_single:
                label, temp_moved = "I'b", Pair(lo - 1, hi - 2)
                temp = items[:pos] + [temp_moved] + items[pos + 1:]
                moved = Pair(lo - 4, lo - 2)
                items[pos - 1:pos + 1] = [moved, Singleton(lo + 2)]
            else:
                raise InadmissibleMove(f"pair {P} in {pp} is blocked by {prev_item}")
        elif hi - lo == 2:
            if prev is None or prev <= lo - 5:
                label, moved = "II'a", Pair(lo - 2, hi - 1)
                items[pos] = moved
            elif prev == lo - 4 and free_single:
                label, temp_moved = "II'b", Pair(lo - 2, hi - 1)
                temp = items[:pos] + [temp_moved] + items[pos + 1:]
                moved = Pair(lo - 5, lo - 2)
                items[pos - 1:pos + 1] = [moved, Singleton(hi)]
            else:
                raise InadmissibleMove(f"pair {P} in {pp} is blocked by {prev_item}")
        else:
            raise BijectionError(f"malformed pair {P}")
    elif sch.kind == "gg":
        if prev is None or prev <= lo - 4:
            label, moved = "GG'-a", Pair(lo - 2, hi - 2)
            items[pos] = moved
        elif prev == lo - 3 and free_single:
            label, temp_moved = "GG'-b", Pair(lo - 2, hi - 2)
            temp = items[:pos] + [temp_moved] + items[pos + 1:]
            moved = Pair(lo - 4, lo - 2)
            items[pos - 1:pos + 1] = [moved, Singleton(lo + 1)]
        else:
            raise InadmissibleMove(f"pair {P} in {pp} is blocked by {prev_item}")
    else:
        raise UnsupportedFamily(f"{pp.family.name} has no pair moves")

    new, trace = _finish(pp, items, moved, label, temp, temp_moved, BACKWARD)
    return new, MoveTrace(pp0, tuple(pre) + trace.steps)


# ---------------------------------------------------------------------------
# the full maps


@dataclass(frozen=True)
class Triple:
    n1: int
    n2: int
    mu: PaddedPartition
    eta: PaddedPartition

    def __post_init__(self):
        if self.mu.length != self.n1 or self.eta.length != self.n2:
            raise ValueError("mu must have n1 parts and eta n2 parts, zeros included")

    @classmethod
    def of(cls, mu: Sequence[int], eta: Sequence[int]) -> Triple:
        return cls(len(mu), len(eta), PaddedPartition(tuple(mu)), PaddedPartition(tuple(eta)))

    @property
    def weight(self) -> int:
        return self.mu.weight + self.eta.weight


def _check_triple(family: ConstraintFamily, t: Triple) -> Scheme:
    sch = scheme_for(family)
    if sch.kind == "plain":
        if t.n2:
            raise InvalidVariant(f"{family.name} has no pairs")
        return sch
    if any(e % sch.step for e in t.eta):
        raise ValueError(f"eta parts must be multiples of {sch.step}: {t.eta.parts}")
    return sch


def _with_singletons(pp: PairedPartition, values: Sequence[int]) -> tuple[list[Item], list[int]]:
    """Replace singleton values in order; return new items and their positions."""
    items = list(pp.items)
    pos = [i for i, it in enumerate(items) if isinstance(it, Singleton)]
    for i, v in zip(pos, values):
        items[i] = Singleton(v)
    return items, pos


def forward_map(
    family: ConstraintFamily, t: Triple, anchored: bool = False
) -> tuple[Partition, MoveTrace]:
    """Build the member of ``family`` attached to (base, mu, eta)."""
    sch = _check_triple(family, t)
    beta = base_partition(family, t.n1, t.n2, anchored)
    steps: list[Step] = []
    pp = beta
    singles = pp.singletons
    for i in reversed(range(t.n1)):
        if t.mu.parts[i] == 0:
            continue
        singles[i] += t.mu.parts[i]
        items, pos = _with_singletons(pp, singles)
        pp = PairedPartition(tuple(items), family, FORWARD, pp.anchor)
        steps.append(Step("mu", pp, pos[i]))
    for r in reversed(range(t.n2)):
        for _ in range(t.eta.parts[r] // sch.step if sch.step else 0):
            try:
                pp, tr = forward_move(pp, r)
            except InadmissibleMove as e:
                raise BijectionError(f"forward move {r} refused for {t}: {e}") from e
            steps.extend(tr.steps)
    lam = pp.partition()
    if not satisfies(family, lam):
        raise BijectionError(f"{lam} is not in {family.name}")
    return lam, MoveTrace(beta, tuple(steps))


def backward_map(
    family: ConstraintFamily, p: Partition | Sequence[int]
) -> tuple[Triple, bool, MoveTrace]:
    """Recover (n1, n2, mu, eta) and the base variant from a member of ``family``."""
    sch = scheme_for(family)
    pp = decompose(family, p, BACKWARD)
    start = pp
    anchored = pp.anchor is not None
    steps: list[Step] = []
    n2 = pp.n2
    eta = []
    for j in range(n2):
        target = _base_pair(pp, j)
        moves = 0
        while pp.pairs[j] != target:
            try:
                pp, tr = backward_move(pp, j)
            except InadmissibleMove as e:
                raise BijectionError(f"backward move on pair {j} refused: {e}") from e
            steps.extend(tr.steps)
            moves += 1
            if moves > start.weight:
                raise BijectionError("backward moves do not terminate")
        eta.append(sch.step * moves)
    n1 = pp.n1
    beta = base_partition(family, n1, n2, anchored)
    singles = pp.singletons
    base_singles = beta.singletons
    mu = [s - b for s, b in zip(singles, base_singles)]
    if any(m < 0 for m in mu) or any(a > b for a, b in zip(mu, mu[1:])):
        raise BijectionError(f"singletons {singles} do not sit over base {base_singles}")
    if any(a > b for a, b in zip(eta, eta[1:])):
        raise BijectionError(f"eta {eta} is not weakly increasing")
    cur = list(singles)
    for i in range(n1):
        if mu[i] == 0:
            continue
        cur[i] -= mu[i]
        items, pos = _with_singletons(pp, cur)
        pp = PairedPartition(tuple(items), family, BACKWARD, pp.anchor)
        steps.append(Step("mu", pp, pos[i]))
    if pp.items != beta.items and pp.parts != beta.parts:
        raise BijectionError(f"ended at {pp}, expected base {beta}")
    return Triple.of(mu, eta), anchored, MoveTrace(start, tuple(steps))


# ---------------------------------------------------------------------------
# enumeration of triples and self-checks


def padded_partitions(length: int, max_weight: int, unit: int = 1) -> Iterator[tuple[int, ...]]:
    """Weakly increasing tuples of multiples of ``unit``, given length, sum <= max_weight."""
    def gen(k: int, budget: int, hi: int) -> Iterator[list[int]]:
        # largest part first, so each part is bounded by the one above it
        if k == 0:
            yield []
            return
        for v in range(0, min(hi, budget) + 1):
            for rest in gen(k - 1, budget - v, v):
                yield rest + [v]

    b = max_weight // unit
    for p in gen(length, b, b):
        yield tuple(unit * x for x in p)


def variants(family: ConstraintFamily) -> tuple[bool, ...]:
    return (False, True) if has_anchored_variant(family) else (False,)


def iter_triples(family: ConstraintFamily, n_max: int) -> Iterator[tuple[bool, Triple, int]]:
    """Every (anchored, triple, weight) with total weight <= n_max."""
    sch = scheme_for(family)
    for anchored in variants(family):
        n2 = 0
        while (sch.kind != "plain" or n2 == 0) and base_partition(family, 0, n2, anchored).weight <= n_max:
            n1 = 0
            while True:
                w = base_partition(family, n1, n2, anchored).weight
                if w > n_max:
                    break
                budget = n_max - w
                for eta in padded_partitions(n2, budget, sch.step or 1):
                    for mu in padded_partitions(n1, budget - sum(eta)):
                        yield anchored, Triple.of(mu, eta), w + sum(mu) + sum(eta)
                n1 += 1
            n2 += 1


@dataclass
class FuzzReport:
    family: str
    n_max: int
    seed: int
    checked_partitions: int = 0
    checked_triples: int = 0
    sampled: int = 0
    failures: list[dict] = field(default_factory=list)
    counts_match: bool = True

    @property
    def ok(self) -> bool:
        return not self.failures and self.counts_match

    def as_dict(self) -> dict:
        return {
            "family": self.family,
            "n_max": self.n_max,
            "seed": self.seed,
            "checked_partitions": self.checked_partitions,
            "checked_triples": self.checked_triples,
            "sampled": self.sampled,
            "counts_match": self.counts_match,
            "failures": self.failures,
            "status": "pass" if self.ok else "fail",
        }


def check_trace(trace: MoveTrace, family: ConstraintFamily, sign: int) -> str | None:
    """Weight bookkeeping and membership along a trace; returns a problem or None."""
    step = scheme_for(family).step
    prev = trace.start
    for i, s in enumerate(trace.steps):
        dw = s.snapshot.weight - prev.weight
        if s.label in MOVE_LABELS:
            if dw != sign * step:
                return f"step {i} {s.label} changed weight by {dw}"
        elif s.label in ("adjust", "regroup"):
            if dw != 0:
                return f"step {i} {s.label} changed weight by {dw}"
        elif s.label != "mu":
            return f"unknown step label {s.label}"
        if not s.temporary and not s.snapshot.is_valid():
            return f"step {i} {s.label} left {s.snapshot} outside {family.name}"
        prev = s.snapshot
    return None


def fuzz_family(
    family: ConstraintFamily, n_max: int, seed: int = 0, samples: int = 0, sample_n_max: int | None = None
) -> FuzzReport:
    """Exhaustive round trips up to ``n_max`` plus optional seeded random triples beyond it."""
    from .partitions import count_table, iter_members

    rep = FuzzReport(family.name, n_max, seed)
    sch = scheme_for(family)

    def fail(kind: str, obj, msg: str):
        rep.failures.append({"check": kind, "input": str(obj), "detail": msg})

    for lam in iter_members(family, n_max):
        rep.checked_partitions += 1
        try:
            t, anchored, btr = backward_map(family, lam)
            prob = check_trace(btr, family, -1)
            if prob:
                fail("backward-trace", lam, prob)
            lam2, ftr = forward_map(family, t, anchored)
            prob = check_trace(ftr, family, +1)
            if prob:
                fail("forward-trace", lam, prob)
            if lam2 != lam:
                fail("roundtrip", lam, f"came back as {lam2}")
        except (BijectionError, InadmissibleMove, ValueError) as e:
            fail("exception", lam, repr(e))

    table = [[0] * (n + 1) for n in range(n_max + 1)]
    for anchored, t, w in iter_triples(family, n_max):
        rep.checked_triples += 1
        m = t.n1 + 2 * t.n2 + (1 if anchored else 0)
        table[w][m] += 1
        try:
            lam, _ = forward_map(family, t, anchored)
            t2, a2, _ = backward_map(family, lam)
            if (t2, a2) != (t, anchored):
                fail("reverse-roundtrip", t, f"came back as {t2} anchored={a2}")
            if lam.weight != w or lam.length != m:
                fail("statistics", t, f"weight/length {lam.weight}/{lam.length}, expected {w}/{m}")
        except (BijectionError, InadmissibleMove, ValueError) as e:
            fail("exception", t, repr(e))
    rep.counts_match = table == count_table(family, n_max)

    if samples:
        rng = random.Random(seed)
        top = sample_n_max if sample_n_max is not None else 2 * n_max
        for _ in range(samples):
            anchored = rng.choice(variants(family))
            n2 = 0 if sch.kind == "plain" else rng.randint(0, 3)
            n1 = rng.randint(0, 4)
            w = base_partition(family, n1, n2, anchored).weight
            if w > top:
                continue
            budget = top - w
            mu = sorted(rng.randint(0, budget // max(1, n1 + n2)) for _ in range(n1))
            eta = sorted(sch.step * rng.randint(0, budget // max(1, (n1 + n2) * sch.step or 1)) for _ in range(n2))
            t = Triple.of(mu, eta)
            rep.sampled += 1
            try:
                lam, _ = forward_map(family, t, anchored)
                t2, a2, _ = backward_map(family, lam)
                if (t2, a2) != (t, anchored):
                    fail("sampled-roundtrip", t, f"came back as {t2} anchored={a2}")
            except (BijectionError, InadmissibleMove, ValueError) as e:
                fail("exception", t, repr(e))
    return rep
