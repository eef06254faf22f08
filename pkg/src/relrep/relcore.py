"""Binary relations over a finite base and the relational operations on them.

A relation over the base ``{0, ..., size-1}`` is stored densely as one
bitmask per row: bit ``y`` of ``rows[x]`` is set iff ``(x, y)`` is in the
relation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator

from relrep.signature import Signature


class BaseMismatch(ValueError):
    pass


class ClosureCapExceeded(RuntimeError):
    pass


class RelSyntaxError(ValueError):
    pass


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True, order=True)
class Rel:
    size: int
    rows: tuple

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("base size must be positive")
        if len(self.rows) != self.size:
            raise ValueError("row count does not match base size")
        limit = 1 << self.size
        for row in self.rows:
            if row < 0 or row >= limit:
                raise ValueError("pair coordinate outside the base")

    @classmethod
    def from_pairs(cls, size: int, pairs: Iterable[tuple[int, int]]) -> Rel:
        rows = [0] * size
        for x, y in pairs:
            if not (0 <= x < size and 0 <= y < size):
                raise ValueError(f"pair {(x, y)} outside base of size {size}")
            rows[x] |= 1 << y
        return cls(size, tuple(rows))

    @classmethod
    def empty(cls, size: int) -> Rel:
        return cls(size, (0,) * size)

    @classmethod
    def identity(cls, size: int) -> Rel:
        return cls(size, tuple(1 << x for x in range(size)))

    @classmethod
    def full(cls, size: int) -> Rel:
        return cls(size, ((1 << size) - 1,) * size)

    @classmethod
    def all_relations(cls, size: int) -> Iterator[Rel]:
        """Every relation over the base, 2**(size*size) of them."""
        width = size * size
        mask = (1 << size) - 1
        for code in range(1 << width):
            yield cls(size, tuple((code >> (size * x)) & mask for x in range(size)))

    def pairs(self) -> list[tuple[int, int]]:
        return [(x, y) for x, row in enumerate(self.rows) for y in _bits(row)]

    def __contains__(self, pair) -> bool:
        x, y = pair
        return 0 <= x < self.size and 0 <= y < self.size and bool(self.rows[x] >> y & 1)

    def __len__(self) -> int:
        return sum(row.bit_count() for row in self.rows)

    def __iter__(self):
        return iter(self.pairs())

    def __bool__(self) -> bool:
        return any(self.rows)

    def issubset(self, other: Rel) -> bool:
        _check_base(self, other)
        return all(a & ~b == 0 for a, b in zip(self.rows, other.rows))

    def union(self, other: Rel) -> Rel:
        _check_base(self, other)
        return Rel(self.size, tuple(a | b for a, b in zip(self.rows, other.rows)))

    def intersection(self, other: Rel) -> Rel:
        _check_base(self, other)
        return Rel(self.size, tuple(a & b for a, b in zip(self.rows, other.rows)))

    def domain_mask(self) -> int:
        """Bitmask of points with at least one successor."""
        mask = 0
        for x, row in enumerate(self.rows):
            if row:
                mask |= 1 << x
        return mask

    def range_mask(self) -> int:
        mask = 0
        for row in self.rows:
            mask |= row
        return mask

    def is_subidentity(self) -> bool:
        return all(row & ~(1 << x) == 0 for x, row in enumerate(self.rows))

    def __str__(self):
        return format_rel(self)

    def __repr__(self):
        return f"Rel({self.size}, {format_rel(self)})"


def _check_base(r: Rel, s: Rel):
    if r.size != s.size:
        raise BaseMismatch(f"base sizes differ: {r.size} vs {s.size}")


def _diagonal(size: int, mask: int) -> Rel:
    return Rel(size, tuple(mask & (1 << x) for x in range(size)))


def compose_angelic(r: Rel, s: Rel) -> Rel:
    """Ordinary relational composition ``r ; s``."""
    _check_base(r, s)
    srows = s.rows
    out = []
    for row in r.rows:
        acc = 0
        for y in _bits(row):
            acc |= srows[y]
        out.append(acc)
    return Rel(r.size, tuple(out))


def compose_demonic(r: Rel, s: Rel) -> Rel:
    """Demonic composition ``r * s``.

    Row ``x`` of ``r ; s`` survives only if every ``r``-successor of ``x``
    lies in the domain of ``s``.
    """
    _check_base(r, s)
    srows = s.rows
    dom_s = s.domain_mask()
    out = []
    for row in r.rows:
        if row & ~dom_s:
            out.append(0)
            continue
        acc = 0
        for y in _bits(row):
            acc |= srows[y]
        out.append(acc)
    return Rel(r.size, tuple(out))


def compose(r: Rel, s: Rel, kind: str) -> Rel:
    if kind == "angelic":
        return compose_angelic(r, s)
    if kind == "demonic":
        return compose_demonic(r, s)
    raise ValueError(f"no composition of kind {kind!r}")


def dom(r: Rel) -> Rel:
    return _diagonal(r.size, r.domain_mask())


def rng(r: Rel) -> Rel:
    return _diagonal(r.size, r.range_mask())


def converse(r: Rel) -> Rel:
    rows = [0] * r.size
    for x, row in enumerate(r.rows):
        for y in _bits(row):
            rows[y] |= 1 << x
    return Rel(r.size, tuple(rows))


def refines_demonic(r: Rel, s: Rel) -> bool:
    """``r ⊑ s``: D(s) ⊆ D(r) and D(s);r ⊆ s."""
    _check_base(r, s)
    dom_s = s.domain_mask()
    if dom_s & ~r.domain_mask():
        return False
    for x in _bits(dom_s):
        if r.rows[x] & ~s.rows[x]:
            return False
    return True


def apply_unary(op: str, r: Rel) -> Rel:
    if op == "D":
        return dom(r)
    if op == "R":
        return rng(r)
    if op == "conv":
        return converse(r)
    raise ValueError(f"unknown unary operation {op!r}")


def constant_rel(name: str, size: int) -> Rel:
    if name == "zero":
        return Rel.empty(size)
    if name == "one":
        return Rel.full(size)
    if name == "id":
        return Rel.identity(size)
    raise ValueError(f"unknown constant {name!r}")


def generate_concrete(size: int, generators: Iterable[Rel], signature: Signature,
                      cap: int = 4096) -> set[Rel]:
    """Close ``generators`` (plus the signature's constants) under its operations."""
    found: dict[Rel, None] = {}
    for g in generators:
        if g.size != size:
            raise BaseMismatch(f"generator over base {g.size}, expected {size}")
        found[g] = None
    for c in sorted(signature.constants):
        found[constant_rel(c, size)] = None
    unary = sorted(signature.unary)
    frontier = list(found)
    while frontier:
        new = []

        def add(rel):
            if rel not in found:
                found[rel] = None
                new.append(rel)
                if len(found) > cap:
                    raise ClosureCapExceeded(f"closure exceeds {cap} relations")

        for r in frontier:
            for op in unary:
                add(apply_unary(op, r))
        if signature.has_composition:
            everything = list(found)
            for r in frontier:
                for s in everything:
                    add(compose(r, s, signature.composition))
                    add(compose(s, r, signature.composition))
        frontier = new
    return set(found)


def sort_key(r: Rel) -> tuple:
    """Deterministic order: by size, then lexicographically by pairs."""
    return (len(r), r.pairs())


_PAIR = re.compile(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)")


def parse_rel(text: str, size: int | None = None) -> Rel:
    """Parse ``{(0,1),(1,0)}``; the base defaults to the smallest that fits."""
    body = "".join(text.split())
    if not (body.startswith("{") and body.endswith("}")):
        raise RelSyntaxError(f"relation literal must be braced: {text!r}")
    inner = body[1:-1]
    pairs = []
    pos = 0
    while pos < len(inner):
        m = _PAIR.match(inner, pos)
        if not m:
            raise RelSyntaxError(f"bad pair at offset {pos} in {text!r}")
        pairs.append((int(m.group(1)), int(m.group(2))))
        pos = m.end()
        if pos < len(inner):
            if inner[pos] != ",":
                raise RelSyntaxError(f"expected ',' at offset {pos} in {text!r}")
            pos += 1
            if pos == len(inner):
                raise RelSyntaxError(f"trailing comma in {text!r}")
    if size is None:
        size = max((max(p) for p in pairs), default=0) + 1
    return Rel.from_pairs(size, pairs)


def format_rel(r: Rel) -> str:
    return "{" + ",".join(f"({x},{y})" for x, y in r.pairs()) + "}"
