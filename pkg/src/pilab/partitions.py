"""Partitions, the constraint families they are filtered by, and brute-force counts.

Parts are kept in weakly increasing order throughout.  Every family predicate
is closed under taking prefixes (smallest parts first), which is what lets
:func:`enumerate_family` prune a depth-first search with the same predicate.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Sequence


class UnknownFamily(ValueError):
    pass


class InvalidGordonParams(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Partition:
    parts: tuple[int, ...] = ()

    def __post_init__(self):
        p = self.parts
        if any(x < 1 for x in p):
            raise ValueError(f"parts must be positive: {p}")
        if any(a > b for a, b in zip(p, p[1:])):
            raise ValueError(f"parts must be weakly increasing: {p}")

    @classmethod
    def of(cls, *parts: int) -> Partition:
        return cls(tuple(sorted(parts)))

    @property
    def weight(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    def __str__(self) -> str:
        return "+".join(map(str, self.parts)) if self.parts else "()"


@dataclass(frozen=True)
class PaddedPartition:
    """Weakly increasing non-negative parts of a fixed length (zeros counted)."""

    parts: tuple[int, ...] = ()

    def __post_init__(self):
        p = self.parts
        if any(x < 0 for x in p):
            raise ValueError(f"parts must be non-negative: {p}")
        if any(a > b for a, b in zip(p, p[1:])):
            raise ValueError(f"parts must be weakly increasing: {p}")

    @property
    def weight(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)


FAMILY_TAGS = (
    "cp1", "cp2", "cp0", "cp1m1", "cp1m2",
    "gg22", "gg21", "ggo21", "gge22",
    "schur", "gordon", "euler_distinct", "euler_odd", "rr1",
)

# residue of the sum of two successive parts that relaxes the gap from 4 to 2
_CAPPARELLI_RESIDUE = {"cp1": 0, "cp2": 0, "cp0": 0, "cp1m1": 1, "cp1m2": 2}


@dataclass(frozen=True)
class ConstraintFamily:
    tag: str
    k: int | None = None
    a: int | None = None

    def __post_init__(self):
        if self.tag not in FAMILY_TAGS:
            raise UnknownFamily(self.tag)
        if self.tag == "gordon":
            if self.k is None or self.a is None or self.k < 2 or not 1 <= self.a <= self.k:
                raise InvalidGordonParams(f"need k >= 2 and 1 <= a <= k, got k={self.k}, a={self.a}")
        elif self.k is not None or self.a is not None:
            raise UnknownFamily(f"{self.tag} takes no parameters")

    @classmethod
    def parse(cls, text: str) -> ConstraintFamily:
        """Accepts ``cp1``, ``gordon-3-2``, ``gordon(3,2)`` and similar."""
        t = text.strip().lower()
        m = re.fullmatch(r"gordon[(\-_:]?\s*(\d+)\s*[,\-_:]\s*(\d+)\s*\)?", t)
        if m:
            return cls("gordon", int(m.group(1)), int(m.group(2)))
        t = t.replace("-", "_")
        aliases = {"d22": "gg22", "d21": "gg21", "do21": "ggo21", "de22": "gge22",
                   "distinct": "euler_distinct", "odd": "euler_odd"}
        t = aliases.get(t, t)
        if t not in FAMILY_TAGS or t == "gordon":
            raise UnknownFamily(text)
        return cls(t)

    @property
    def name(self) -> str:
        if self.tag == "gordon":
            return f"gordon-{self.k}-{self.a}"
        return self.tag

    def __str__(self) -> str:
        return self.name

    @property
    def min_part(self) -> int:
        """Smallest part any member can have."""
        return {"cp1": 2, "gg21": 3, "ggo21": 2}.get(self.tag, 1)


def _tail_ok(family: ConstraintFamily, p: Sequence[int]) -> bool:
    """Check the constraints that involve the last part of ``p``.

    Assumes ``p[:-1]`` already passes.
    """
    tag = family.tag
    b = p[-1]
    if len(p) == 1:
        if b < family.min_part:
            return False
        if tag == "cp2" and b == 2:
            return False
        if tag == "gordon" and b == 1 and family.a < 2:
            return False
        if tag == "euler_odd":
            return b % 2 == 1
        return True
    a = p[-2]
    d = b - a
    if tag in _CAPPARELLI_RESIDUE:
        if tag == "cp2" and b == 2:
            return False
        if d < 2:
            return False
        return d >= 4 or (a + b) % 3 == _CAPPARELLI_RESIDUE[tag]
    if tag in ("gg22", "gg21", "ggo21"):
        return d >= 3 or (d == 2 and a % 2 == 1 and b % 2 == 1)
    if tag == "gge22":
        return d >= 3 or (d == 2 and a % 2 == 0 and b % 2 == 0)
    if tag == "schur":
        return d >= 3 and not (d == 3 and a % 3 == 0)
    if tag == "euler_distinct":
        return d >= 1
    if tag == "euler_odd":
        return b % 2 == 1
    if tag == "rr1":
        return d >= 2
    if tag == "gordon":
        k = family.k
        if b == 1 and p.count(1) > family.a - 1:
            return False
        return len(p) < k or b - p[-k] >= 2
    raise UnknownFamily(tag)


def satisfies(family: ConstraintFamily, p: Partition | Sequence[int]) -> bool:
    """Whole-partition membership test, written independently of the search pruning."""
    parts = tuple(p.parts if isinstance(p, Partition) else p)
    if any(x < 1 for x in parts) or any(x > y for x, y in zip(parts, parts[1:])):
        return False
    if not parts:
        return True
    adj = list(zip(parts, parts[1:]))
    tag = family.tag
    if tag in _CAPPARELLI_RESIDUE:
        r = _CAPPARELLI_RESIDUE[tag]
        if tag == "cp1" and parts[0] < 2:
            return False
        if tag == "cp2" and 2 in parts:
            return False
        return all(b - a >= 4 or (b - a >= 2 and (a + b) % 3 == r) for a, b in adj)
    if tag in ("gg22", "gg21", "ggo21", "gge22"):
        if parts[0] < family.min_part:
            return False
        parity = 0 if tag == "gge22" else 1
        return all(b - a >= 3 or (b - a == 2 and a % 2 == parity) for a, b in adj)
    if tag == "schur":
        return all(b - a >= 3 for a, b in adj) and not any(
            a % 3 == 0 and b == a + 3 for a, b in adj)
    if tag == "euler_distinct":
        return len(set(parts)) == len(parts)
    if tag == "euler_odd":
        return all(x % 2 for x in parts)
    if tag == "rr1":
        return all(b - a >= 2 for a, b in adj)
    if tag == "gordon":
        k, a = family.k, family.a
        return parts.count(1) <= a - 1 and all(
            parts[i + k - 1] - parts[i] >= 2 for i in range(len(parts) - k + 1))
    raise UnknownFamily(tag)


def _search(family: ConstraintFamily, n_max: int, exact: bool) -> Iterator[tuple[int, ...]]:
    # depth-first over weakly increasing sequences, ascending, so output is lexicographic
    prefix: list[int] = []

    def rec(remaining: int, smallest: int):
        if not exact or remaining == 0:
            yield tuple(prefix)
        for x in range(smallest, remaining + 1):
            prefix.append(x)
            if _tail_ok(family, prefix):
                yield from rec(remaining - x, x)
            prefix.pop()

    yield from rec(n_max, 1)


def enumerate_family(family: ConstraintFamily, n: int) -> list[Partition]:
    """All members of ``family`` of weight ``n``, lexicographically ordered."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return [Partition(p) for p in _search(family, n, exact=True)]


def iter_members(family: ConstraintFamily, n_max: int) -> Iterator[Partition]:
    """Every member of weight at most ``n_max``."""
    for p in _search(family, n_max, exact=False):
        yield Partition(p)


def all_partitions(n: int) -> Iterator[tuple[int, ...]]:
    """Unrestricted partitions of ``n`` as ascending tuples.

    Kelleher's ascending-composition generator; deliberately independent of
    the family search, which it serves as an oracle for.
    """
    if n == 0:
        yield ()
        return
    a = [0] * (n + 1)
    k = 1
    y = n - 1
    while k != 0:
        x = a[k - 1] + 1
        k -= 1
        while 2 * x <= y:
            a[k] = x
            y -= x
            k += 1
        l = k + 1
        while x <= y:
            a[k] = x
            a[l] = y
            yield tuple(a[: k + 2])
            x += 1
            y -= 1
        a[k] = x + y
        y = x + y - 1
        yield tuple(a[: k + 1])


def count_table(family: ConstraintFamily, n_max: int) -> list[list[int]]:
    """c[n][m]: members of weight n with m parts, for 0 <= m <= n <= n_max."""
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    c = [[0] * (n + 1) for n in range(n_max + 1)]
    for p in _search(family, n_max, exact=False):
        c[sum(p)][len(p)] += 1
    return c


def totals(table: Sequence[Sequence[int]]) -> list[int]:
    return [sum(row) for row in table]


def shift_check(
    family_pair: tuple[ConstraintFamily, ConstraintFamily], shift: int, n_max: int
) -> bool:
    """True iff left[n + shift*m][m] == right[n][m] for all n <= n_max and all m.

    The left table is computed far enough to cover every n + shift*m.
    """
    if shift not in (1, 2):
        raise ValueError("shift must be 1 or 2")
    left_f, right_f = family_pair
    right = count_table(right_f, n_max)
    left = count_table(left_f, n_max * (1 + shift))
    for n in range(n_max + 1):
        # m > n is included: right side is zero there, left side need not be
        for m in range(n_max + 1):
            rv = right[n][m] if m <= n else 0
            if left[n + shift * m][m] != rv:
                return False
    return True
