"""Finite representations: builders, a verifier, and a brute-force oracle."""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from relrep import relcore
from relrep.algebra import FinStructure, StructureError, check_equation, validate_structure
from relrep.relcore import Rel


class RepresentationError(RuntimeError):
    def __init__(self, message: str, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class PreconditionError(StructureError):
    pass


class Inconclusive(RuntimeError):
    pass


@dataclass(frozen=True)
class RepMap:
    structure: FinStructure
    base: int
    assignment: dict  # element id -> Rel

    def __getitem__(self, element: str) -> Rel:
        return self.assignment[element]

    def to_json(self) -> dict:
        return {
            "base": self.base,
            "assignment": {e: [list(p) for p in self.assignment[e].pairs()]
                           for e in self.structure.elements},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)

    @classmethod
    def from_json(cls, structure: FinStructure, data: dict) -> RepMap:
        base = int(data["base"])
        raw = data["assignment"]
        missing = [e for e in structure.elements if e not in raw]
        if missing:
            raise ValueError(f"assignment misses element {missing[0]!r}")
        extra = sorted(set(raw) - set(structure.elements))
        if extra:
            raise ValueError(f"assignment names unknown element {extra[0]!r}")
        assignment = {e: Rel.from_pairs(base, [tuple(p) for p in raw[e]])
                      for e in structure.elements}
        return cls(structure, base, assignment)


@dataclass(frozen=True)
class Violation:
    kind: str
    elements: tuple
    detail: str = ""

    def __str__(self):
        where = ", ".join(self.elements)
        return f"{self.kind}({where})" + (f": {self.detail}" if self.detail else "")


def verify_representation(rep: RepMap) -> list[Violation]:
    """Every way in which ``rep`` fails to be a representation; empty if none."""
    s = rep.structure
    sig = s.signature
    names = s.elements
    out = []
    try:
        theta = [rep.assignment[e] for e in names]
    except KeyError as e:
        return [Violation("total", (str(e.args[0]),), "element not assigned")]
    for e, r in zip(names, theta):
        if r.size != rep.base:
            out.append(Violation("base", (e,), f"relation over base {r.size}, expected {rep.base}"))
    if out:
        return out
    seen = {}
    for e, r in zip(names, theta):
        if r in seen:
            out.append(Violation("faithful", (seen[r], e), "same relation"))
        else:
            seen[r] = e
    if sig.has_composition:
        for a in range(s.size):
            for b in range(s.size):
                want = relcore.compose(theta[a], theta[b], sig.composition)
                if theta[s.mul(a, b)] != want:
                    out.append(Violation("compose", (names[a], names[b]),
                                         f"{names[s.mul(a, b)]} is {theta[s.mul(a, b)]}, product is {want}"))
    for op, table in (("D", s.dmap), ("R", s.rmap), ("conv", s.cmap)):
        if op not in sig.unary:
            continue
        for a in range(s.size):
            want = relcore.apply_unary(op, theta[a])
            if theta[table[a]] != want:
                out.append(Violation(op, (names[a],), f"got {theta[table[a]]}, expected {want}"))
    if sig.order:
        for a in range(s.size):
            for b in range(s.size):
                if s.le(a, b) != theta[a].issubset(theta[b]):
                    out.append(Violation("order", (names[a], names[b]),
                                         "declared order and inclusion disagree"))
    consts = dict(s.consts)
    if "zero" in consts and theta[consts["zero"]]:
        out.append(Violation("zero", (names[consts["zero"]],), "not the empty relation"))
    if "id" in consts:
        iota = theta[consts["id"]]
        if not iota.is_subidentity():
            out.append(Violation("id", (names[consts["id"]],), "not below the identity"))
        for a in range(s.size):
            if (relcore.compose_angelic(iota, theta[a]) != theta[a]
                    or relcore.compose_angelic(theta[a], iota) != theta[a]):
                out.append(Violation("id", (names[consts["id"]], names[a]), "not a unit"))
    if "one" in consts:
        top = theta[consts["one"]]
        for a in range(s.size):
            if not theta[a].issubset(top):
                out.append(Violation("one", (names[a],), "not below one"))
        fld = top.domain_mask() | top.range_mask()
        equiv = (relcore.converse(top) == top
                 and relcore.compose_angelic(top, top).issubset(top)
                 and all((x, x) in top for x in range(rep.base) if fld >> x & 1))
        if not equiv:
            out.append(Violation("one", (names[consts["one"]],), "not an equivalence on its field"))
    return out


def _checked(rep: RepMap, builder: str) -> RepMap:
    bad = verify_representation(rep)
    if bad:
        raise RepresentationError(f"{builder} produced an invalid representation", bad)
    return rep


# -- Cayley ---------------------------------------------------------------------

def cayley_rep(s: FinStructure) -> RepMap:
    """Right-translation representation, with a unit adjoined if none is declared."""
    sig = s.signature
    if not sig.has_composition or sig.unary or sig.order or not sig.constants <= {"id"}:
        raise PreconditionError(f"Cayley needs composition and at most an identity; got {sig}")
    if check_equation(s, "associativity", limit=1):
        raise PreconditionError("composition is not associative")
    n = s.size
    unit = s.const("id")
    base = n if unit is not None else n + 1
    assignment = {}
    for a, name in enumerate(s.elements):
        pairs = [(x, s.mul(x, a)) for x in range(n)]
        if unit is None:
            pairs.append((n, a))
        assignment[name] = Rel.from_pairs(base, pairs)
    return _checked(RepMap(s, base, assignment), "cayley_rep")


# -- Zareckii -------------------------------------------------------------------

def zareckii_rep(s: FinStructure) -> RepMap:
    """``(x, y) ∈ a^θ`` iff ``y ≤ x∘a`` over the elements plus an adjoined unit."""
    sig = s.signature
    if sig.composition != "angelic" or not sig.order or sig.unary or sig.constants:
        raise PreconditionError(f"Zareckii needs exactly order and angelic composition; got {sig}")
    report = validate_structure(s)
    if report.errors:
        raise PreconditionError("invalid structure: " + "; ".join(f.message or f.law for f in report.errors))
    if check_equation(s, "associativity", limit=1):
        raise PreconditionError("composition is not associative")
    n = s.size
    for a, b in sorted(s.leq):
        for c in range(n):
            if not (s.le(s.mul(c, a), s.mul(c, b)) and s.le(s.mul(a, c), s.mul(b, c))):
                raise PreconditionError(
                    f"composition is not monotone at {s.elements[a]} ≤ {s.elements[b]}, {s.elements[c]}")
    e = n
    assignment = {}
    for a, name in enumerate(s.elements):
        pairs = []
        for x in range(n + 1):
            xa = a if x == e else s.mul(x, a)
            pairs += [(x, y) for y in range(n) if s.le(y, xa)]
        assignment[name] = Rel.from_pairs(n + 1, pairs)
    return _checked(RepMap(s, n + 1, assignment), "zareckii_rep")


# -- closed sets ----------------------------------------------------------------

def _require_domain_algebra(s: FinStructure):
    sig = s.signature
    if not ({"D", "R", "conv"} <= sig.unary and sig.has_composition):
        raise PreconditionError(f"closed sets need D, R, converse and composition; got {sig}")
    doms = sorted(set(s.dmap) | set(s.rmap))
    for p in doms:
        for q in doms:
            if s.mul(p, q) != s.mul(q, p):
                raise PreconditionError(
                    f"domain elements {s.elements[p]} and {s.elements[q]} do not commute")


def _upsets(s: FinStructure, allowed: list, cap: int):
    """Nonempty upward-closed subsets of ``allowed`` (which must itself be an upset)."""
    above = {x: {y for y in allowed if y != x and s.le(x, y)} for x in allowed}
    # upper bounds of x are decided before x
    order = sorted(allowed, key=lambda x: (len(above[x]), x))
    count = 0

    def rec(i, chosen):
        nonlocal count
        if i == len(order):
            if chosen:
                count += 1
                if count > cap:
                    raise Inconclusive(f"more than {cap} candidate sets")
                yield frozenset(chosen)
            return
        x = order[i]
        yield from rec(i + 1, chosen)
        if above[x] <= chosen:
            chosen.add(x)
            yield from rec(i + 1, chosen)
            chosen.discard(x)

    yield from rec(0, set())


def _fold(s: FinStructure, values):
    it = iter(values)
    acc = next(it)
    for v in it:
        acc = s.mul(acc, v)
    return acc


def closure_op(s: FinStructure, members) -> frozenset:
    """``(D(A)∘A∘R(A))↑`` with D(A), R(A) folded in element order."""
    ms = sorted(members)
    d = _fold(s, (s.D(a) for a in ms))
    r = _fold(s, (s.R(a) for a in ms))
    core = {s.mul(s.mul(d, a), r) for a in ms}
    return frozenset(b for b in range(s.size) if any(s.le(c, b) for c in core))


def closed_sets(s: FinStructure, cap: int = 1 << 18) -> list[frozenset]:
    """All zero-free nonempty fixpoints of ``closure_op``, as index sets."""
    _require_domain_algebra(s)
    zero = s.const("zero")
    allowed = [x for x in range(s.size) if x != zero]
    found = [u for u in _upsets(s, allowed, cap) if closure_op(s, u) == u]
    return sorted(found, key=lambda u: (len(u), sorted(u)))


def closed_set_rep(s: FinStructure, cap: int = 1 << 18) -> RepMap:
    """``(S, T) ∈ a^ρ`` iff ``S∘a ⊆ T`` and ``T∘ă ⊆ S``, over the closed sets."""
    points = closed_sets(s, cap)
    if not points:
        raise RepresentationError("no closed sets")
    assignment = {}
    for a, name in enumerate(s.elements):
        ca = s.conv(a)
        pairs = []
        for i, S in enumerate(points):
            sa = {s.mul(x, a) for x in S}
            for j, T in enumerate(points):
                if sa <= T and {s.mul(t, ca) for t in T} <= S:
                    pairs.append((i, j))
        assignment[name] = Rel.from_pairs(len(points), pairs)
    return _checked(RepMap(s, len(points), assignment), "closed_set_rep")


# -- brute force ----------------------------------------------------------------

class _Search:
    def __init__(self, s: FinStructure, k: int, step_cap: int):
        self.s = s
        self.k = k
        self.steps = 0
        self.step_cap = step_cap
        n = s.size
        sub = [Rel(k, tuple(mask & (1 << x) for x in range(k))) for mask in range(1 << k)]
        every = list(Rel.all_relations(k))
        consts = dict(s.consts)
        self.candidates = []
        for a in range(n):
            if consts.get("zero") == a:
                self.candidates.append([Rel.empty(k)])
            elif a in s.dr_image or consts.get("id") == a:
                self.candidates.append(sub)
            else:
                self.candidates.append(every)
        self.order = sorted(range(n), key=lambda a: (a not in s.dr_image, len(self.candidates[a]), a))
        self.sub_only = {a for a in range(n) if a in s.dr_image}

    def propagate(self, theta: dict, start: list) -> bool:
        s = self.s
        sig = s.signature
        used = {r: a for a, r in theta.items()}
        queue = list(start)

        def force(a, rel):
            cur = theta.get(a)
            if cur is not None:
                return cur == rel
            if a in self.sub_only and not rel.is_subidentity():
                return False
            if used.get(rel, a) != a:
                return False
            theta[a] = rel
            used[rel] = a
            queue.append(a)
            return True

        while queue:
            a = queue.pop()
            ra = theta[a]
            for op, table in (("D", s.dmap), ("R", s.rmap), ("conv", s.cmap)):
                if op in sig.unary and not force(table[a], relcore.apply_unary(op, ra)):
                    return False
            if sig.has_composition:
                for b in list(theta):
                    rb = theta[b]
                    if not force(s.mul(a, b), relcore.compose(ra, rb, sig.composition)):
                        return False
                    if not force(s.mul(b, a), relcore.compose(rb, ra, sig.composition)):
                        return False
            if sig.order:
                for b in list(theta):
                    if s.le(a, b) != ra.issubset(theta[b]) or s.le(b, a) != theta[b].issubset(ra):
                        return False
        return True

    def run(self, theta: dict):
        self.steps += 1
        if self.steps > self.step_cap:
            raise Inconclusive(f"brute force exceeded {self.step_cap} steps")
        free = [a for a in self.order if a not in theta]
        if not free:
            return theta
        a = free[0]
        used = set(theta.values())
        for rel in self.candidates[a]:
            if rel in used:
                continue
            trial = dict(theta)
            trial[a] = rel
            if self.propagate(trial, [a]):
                got = self.run(trial)
                if got is not None:
                    return got
        return None


def _search_slice(s: FinStructure, k: int, step_cap: int, part: int, parts: int):
    search = _Search(s, k, step_cap)
    if not search.order:
        return None
    a = search.order[0]
    for idx, rel in enumerate(search.candidates[a]):
        if idx % parts != part:
            continue
        theta = {a: rel}
        if search.propagate(theta, [a]):
            got = search.run(theta)
            if got is not None:
                return {s.elements[x]: r for x, r in got.items()}
    return None


def brute_force_search(s: FinStructure, max_base: int, step_cap: int = 2_000_000,
                       jobs: int = 1) -> RepMap | None:
    """First representation over a base of size 1..max_base, or None if there is none."""
    for k in range(1, max_base + 1):
        if jobs > 1:
            with ProcessPoolExecutor(jobs) as pool:
                results = list(pool.map(_search_slice, [s] * jobs, [k] * jobs,
                                        [step_cap] * jobs, range(jobs), [jobs] * jobs))
            found = next((r for r in results if r is not None), None)
        else:
            found = _search_slice(s, k, step_cap, 0, 1)
        if found is not None:
            return _checked(RepMap(s, k, found), "brute_force_search")
    return None
