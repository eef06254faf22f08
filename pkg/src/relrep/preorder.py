"""The refinement preorder ⪯, the ◁ predicates, and cycle certificates.

Products of three elements are bracketed to the right: ``u*s'*v`` is
``u*(s'*v)`` and ``s*v*u`` is ``s*(v*u)``.  Replay uses the same
bracketing, so a certificate names the exact table entries it relies on.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass

import networkx as nx

from relrep.algebra import FinStructure, StructureError


class SignatureMismatch(StructureError):
    pass


@dataclass(frozen=True)
class PrecStep:
    """One derivation step.

    ``witnesses`` is ``(u, v)`` for base, ``(s', t', u, v)`` for sandwich
    (``u`` or ``v`` may be ``None`` for one-sided steps) and ``(v,)`` for
    transitive.  All entries are element ids.
    """

    kind: str
    s: str
    t: str
    witnesses: tuple

    _FIELDS = {"base": ("u", "v"), "sandwich": ("s_prime", "t_prime", "u", "v"),
               "transitive": ("v",)}

    def to_json(self) -> dict:
        out = {"kind": self.kind, "s": self.s, "t": self.t}
        out.update(zip(self._FIELDS[self.kind], self.witnesses))
        return out

    @classmethod
    def from_json(cls, data: dict) -> PrecStep:
        kind = data["kind"]
        if kind not in cls._FIELDS:
            raise ValueError(f"unknown step kind {kind!r}")
        return cls(kind, data["s"], data["t"], tuple(data[k] for k in cls._FIELDS[kind]))


@dataclass(frozen=True)
class CycleCertificate:
    structure: str
    cycle: tuple
    derivations: tuple  # one tuple of PrecStep per consecutive pair, cyclically

    def to_json(self) -> dict:
        return {
            "structure": self.structure,
            "cycle": list(self.cycle),
            "derivations": [[step.to_json() for step in d] for d in self.derivations],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    @classmethod
    def from_json(cls, data: dict) -> CycleCertificate:
        return cls(data["structure"], tuple(data["cycle"]),
                   tuple(tuple(PrecStep.from_json(st) for st in d) for d in data["derivations"]))


def _require_drs(s: FinStructure):
    sig = s.signature
    if sig.composition != "demonic" or not {"D", "R"} <= sig.unary:
        raise SignatureMismatch(f"needs D, R and demonic composition; got {sig}")


def _sandwich(s: FinStructure, u, x, v):
    if u is None:
        return s.mul(x, v)
    if v is None:
        return s.mul(u, x)
    return s.mul(u, s.mul(x, v))


def _base_steps(s: FinStructure) -> dict:
    """``(s,t) -> (u,v)`` for the first witness of each base pair, by index."""
    out = {}
    for u in range(s.size):
        for v in range(s.size):
            uv = s.mul(u, v)
            if s.D(uv) != uv:
                continue
            a = s.R(s.mul(u, s.D(v)))
            b = s.mul(a, s.mul(v, u))
            out.setdefault((a, b), (u, v))
    return out


class Closure:
    """Least relation containing the seeds, closed under sandwiching and transitivity.

    Every pair keeps the step that first produced it; since pairs are found
    level by level, that step sits at minimal depth.
    """

    def __init__(self, s: FinStructure, seeds: dict, one_sided: bool = False):
        self.s = s
        self.step = {}  # (a, b) -> (kind, witnesses)
        self.level = {}
        n = s.size
        maps = [(u, v, tuple(_sandwich(s, u, x, v) for x in range(n)))
                for u in range(n) for v in range(n)]
        if one_sided:
            maps += [(u, None, tuple(s.mul(u, x) for x in range(n))) for u in range(n)]
            maps += [(None, v, tuple(s.mul(x, v) for x in range(n))) for v in range(n)]
        succ = defaultdict(set)
        pred = defaultdict(set)
        frontier = []
        for pair, wit in seeds.items():
            self.step[pair] = ("base", wit)
            self.level[pair] = 1
            frontier.append(pair)
        depth = 1
        while frontier:
            for a, b in frontier:
                succ[a].add(b)
                pred[b].add(a)
            depth += 1
            new = {}
            for a, b in frontier:
                for u, v, row in maps:
                    p = (row[a], row[b])
                    if p not in self.step and p not in new:
                        new[p] = ("sandwich", (a, b, u, v))
                for c in sorted(succ[b]):
                    p = (a, c)
                    if p not in self.step and p not in new:
                        new[p] = ("transitive", (b,))
                for z in sorted(pred[a]):
                    p = (z, b)
                    if p not in self.step and p not in new:
                        new[p] = ("transitive", (a,))
            for p, st in new.items():
                self.step[p] = st
                self.level[p] = depth
            frontier = list(new)

    def pairs(self) -> set:
        return set(self.step)

    def derivation(self, pair) -> list[PrecStep]:
        """Steps in dependency order ending with ``pair``."""
        names = self.s.elements
        seen = set()
        out = []
        stack = [(pair, False)]
        while stack:
            p, expanded = stack.pop()
            if p in seen:
                continue
            kind, wit = self.step[p]
            if expanded:
                seen.add(p)
                a, b = p
                w = tuple(None if x is None else names[x] for x in wit)
                out.append(PrecStep(kind, names[a], names[b], w))
                continue
            stack.append((p, True))
            if kind == "sandwich":
                stack.append(((wit[0], wit[1]), False))
            elif kind == "transitive":
                v = wit[0]
                stack.append(((v, p[1]), False))
                stack.append(((p[0], v), False))
        return out


def prec_base(s: FinStructure) -> dict:
    """Pairs ``(s, t)`` of ⪯₁ mapped to a witness ``(u, v)``, by element id."""
    _require_drs(s)
    names = s.elements
    return {(names[a], names[b]): (names[u], names[v])
            for (a, b), (u, v) in _base_steps(s).items()}


def prec_closure(s: FinStructure, one_sided: bool = False) -> Closure:
    _require_drs(s)
    return Closure(s, _base_steps(s), one_sided)


def prec_pairs(s: FinStructure, one_sided: bool = False) -> set:
    """The relation ⪯ as a set of element-id pairs."""
    c = prec_closure(s, one_sided)
    names = s.elements
    return {(names[a], names[b]) for a, b in c.pairs()}


def find_prec_cycle(s: FinStructure, one_sided: bool = False) -> CycleCertificate | None:
    closure = prec_closure(s, one_sided)
    g = nx.DiGraph()
    g.add_edges_from((a, b) for a, b in closure.pairs() if a != b)
    comps = [sorted(c) for c in nx.strongly_connected_components(g) if len(c) > 1]
    if not comps:
        return None
    cycle = min(comps)
    derivations = []
    for k, a in enumerate(cycle):
        b = cycle[(k + 1) % len(cycle)]
        derivations.append(tuple(closure.derivation((a, b))))
    return CycleCertificate(s.name, s.names(cycle), tuple(derivations))


def _replay_step(s: FinStructure, step: PrecStep, known: set) -> bool:
    idx = s.id_of
    a, b = idx(step.s), idx(step.t)
    w = [None if x is None else idx(x) for x in step.witnesses]
    if step.kind == "base":
        u, v = w
        if u is None or v is None:
            return False
        uv = s.mul(u, v)
        return (s.D(uv) == uv and a == s.R(s.mul(u, s.D(v)))
                and b == s.mul(a, s.mul(v, u)))
    if step.kind == "sandwich":
        sp, tp, u, v = w
        if sp is None or tp is None or (u is None and v is None):
            return False
        return ((sp, tp) in known and a == _sandwich(s, u, sp, v)
                and b == _sandwich(s, u, tp, v))
    if step.kind == "transitive":
        (v,) = w
        return v is not None and (a, v) in known and (v, b) in known
    return False


def replay_certificate(s: FinStructure, cert: CycleCertificate) -> bool:
    """Check every step of ``cert`` against the tables of ``s``."""
    try:
        cycle = [s.id_of(e) for e in cert.cycle]
        if len(cycle) < 2 or len(set(cycle)) != len(cycle):
            return False
        if len(cert.derivations) != len(cycle):
            return False
        for k, steps in enumerate(cert.derivations):
            if not steps:
                return False
            known = set()
            for step in steps:
                if not _replay_step(s, step, known):
                    return False
                known.add((s.id_of(step.s), s.id_of(step.t)))
            last = steps[-1]
            target = (cycle[k], cycle[(k + 1) % len(cycle)])
            if (s.id_of(last.s), s.id_of(last.t)) != target:
                return False
    except (StructureError, ValueError, TypeError):
        return False
    return True


def triangle_closure(s: FinStructure, variant: str) -> set:
    """The ◁ relation: angelic seeds ``D(x);D(y) ◁ D(y)``, demonic ``D(x)*y ◁ y``."""
    sig = s.signature
    if variant not in ("angelic", "demonic"):
        raise ValueError(f"unknown variant {variant!r}")
    if sig.composition != variant or "D" not in sig.unary:
        raise SignatureMismatch(f"{variant} variant needs D and {variant} composition; got {sig}")
    seeds = {}
    for x in range(s.size):
        for y in range(s.size):
            if variant == "angelic":
                pair = (s.mul(s.D(x), s.D(y)), s.D(y))
            else:
                pair = (s.mul(s.D(x), y), y)
            seeds.setdefault(pair, (x, y))
    c = Closure(s, seeds)
    names = s.elements
    return {(names[a], names[b]) for a, b in c.pairs()}
