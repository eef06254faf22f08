"""Abstract finite structures given by operation tables."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

from relrep import relcore
from relrep.relcore import Rel
from relrep.signature import Signature


class StructureError(ValueError):
    pass


class NotClosed(StructureError):
    pass


@dataclass(frozen=True)
class FinStructure:
    """A finite structure over element ids ``elements``.

    Tables are indexed by element position: ``comp[i][j]`` is the index of
    ``elements[i] ∘ elements[j]``.  Tables for operations outside the
    signature are ``None``.  ``leq`` holds index pairs and includes the
    reflexive ones.
    """

    name: str
    signature: Signature
    elements: tuple
    comp: tuple | None = None
    dmap: tuple | None = None
    rmap: tuple | None = None
    cmap: tuple | None = None
    leq: frozenset | None = None
    consts: tuple = ()
    index: dict = field(init=False, repr=False, compare=False)
    dr_image: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        object.__setattr__(self, "consts", tuple(sorted(dict(self.consts).items())))
        object.__setattr__(self, "index", {e: i for i, e in enumerate(self.elements)})
        image = set()
        for table in (self.dmap, self.rmap):
            if table is not None:
                image.update(v for v in table if isinstance(v, int) and 0 <= v < len(self.elements))
        object.__setattr__(self, "dr_image", frozenset(image))

    @classmethod
    def build(cls, name: str, signature: Signature, elements: Iterable[str], *,
              compose: Mapping | Callable | None = None, domain: Mapping | None = None,
              range_: Mapping | None = None, converse: Mapping | None = None,
              leq: Iterable | None = None, consts: Mapping | None = None) -> FinStructure:
        """Build from name-keyed tables.

        ``compose`` is either a mapping ``(x, y) -> z`` or a function of two
        element ids.  ``leq`` may omit reflexive pairs.
        """
        elements = tuple(elements)
        idx = {e: i for i, e in enumerate(elements)}
        if len(idx) != len(elements):
            raise StructureError("duplicate element ids")

        def look(e):
            try:
                return idx[e]
            except KeyError:
                raise StructureError(f"unknown element {e!r}") from None

        def unary(table):
            if table is None:
                return None
            return tuple(look(table[e]) for e in elements)

        comp = None
        if compose is not None:
            fn = compose if callable(compose) else (lambda x, y: compose[(x, y)])
            comp = tuple(tuple(look(fn(x, y)) for y in elements) for x in elements)
        order = None
        if leq is not None:
            order = {(i, i) for i in range(len(elements))}
            order.update((look(a), look(b)) for a, b in leq)
            order = frozenset(order)
        cs = {k: look(v) for k, v in (consts or {}).items()}
        return cls(name, signature, elements, comp, unary(domain), unary(range_),
                   unary(converse), order, cs)

    def __len__(self):
        return len(self.elements)

    @property
    def size(self) -> int:
        return len(self.elements)

    def const(self, name: str) -> int | None:
        return dict(self.consts).get(name)

    def id_of(self, name: str) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise StructureError(f"unknown element {name!r}") from None

    def mul(self, a: int, b: int) -> int:
        return self.comp[a][b]

    def D(self, a: int) -> int:
        return self.dmap[a]

    def R(self, a: int) -> int:
        return self.rmap[a]

    def conv(self, a: int) -> int:
        return self.cmap[a]

    def le(self, a: int, b: int) -> bool:
        if self.leq is None:
            return a == b
        return (a, b) in self.leq

    def order_pairs(self) -> frozenset:
        """The declared order, or equality when none is declared."""
        if self.leq is None:
            return frozenset((i, i) for i in range(self.size))
        return self.leq

    def names(self, indices: Iterable[int]) -> tuple:
        return tuple(self.elements[i] for i in indices)

    def with_compose(self, a: int, b: int, value: int) -> FinStructure:
        """Copy with one composition entry changed."""
        rows = [list(r) for r in self.comp]
        rows[a][b] = value
        return FinStructure(self.name, self.signature, self.elements,
                            tuple(tuple(r) for r in rows), self.dmap, self.rmap,
                            self.cmap, self.leq, dict(self.consts))


# -- laws ---------------------------------------------------------------------

@dataclass(frozen=True)
class Law:
    name: str
    arity: int
    needs: frozenset
    lhs: Callable
    rhs: Callable
    composition: str | None = None


def _law(name, arity, needs, lhs, rhs, composition=None):
    return Law(name, arity, frozenset(needs), lhs, rhs, composition)


LAWS = {
    law.name: law
    for law in [
        _law("D-idempotent", 1, {"D"}, lambda s, x: s.D(s.D(x)), lambda s, x: s.D(x)),
        _law("R-idempotent", 1, {"R"}, lambda s, x: s.R(s.R(x)), lambda s, x: s.R(x)),
        _law("D-left-unit", 1, {"D", "compose"}, lambda s, x: s.mul(s.D(x), x), lambda s, x: x),
        _law("R-right-unit", 1, {"R", "compose"}, lambda s, x: s.mul(x, s.R(x)), lambda s, x: x),
        _law("associativity", 3, {"compose"},
             lambda s, x, y, z: s.mul(s.mul(x, y), z),
             lambda s, x, y, z: s.mul(x, s.mul(y, z))),
        _law("conv-involution", 1, {"conv"}, lambda s, x: s.conv(s.conv(x)), lambda s, x: x),
        _law("demonic-domain-soundness", 2, {"D", "compose"},
             lambda s, x, y: s.mul(s.D(s.mul(x, s.D(y))), x),
             lambda s, x, y: s.mul(x, s.D(y)),
             composition="demonic"),
    ]
}

LINT_LAWS = ("D-idempotent", "R-idempotent", "D-left-unit", "R-right-unit", "associativity")


def _available(s: FinStructure) -> set:
    ops = set(s.signature.unary)
    if s.signature.has_composition:
        ops.add("compose")
    return ops


def law_applies(s: FinStructure, law: Law) -> bool:
    if not law.needs <= _available(s):
        return False
    return law.composition is None or law.composition == s.signature.composition


def check_equation(s: FinStructure, law: str | Law, limit: int | None = None) -> list[tuple]:
    """All assignments (as element-id tuples) where the law's sides differ."""
    if isinstance(law, str):
        try:
            law = LAWS[law]
        except KeyError:
            raise StructureError(f"unknown law {law!r}") from None
    if not law_applies(s, law):
        raise StructureError(f"law {law.name} uses operations outside the signature {s.signature}")
    out = []
    for xs in itertools.product(range(s.size), repeat=law.arity):
        if law.lhs(s, *xs) != law.rhs(s, *xs):
            out.append(s.names(xs))
            if limit is not None and len(out) >= limit:
                break
    return out


# -- validation ---------------------------------------------------------------

@dataclass(frozen=True)
class Finding:
    law: str
    status: str  # "ok", "warning" or "error"
    counterexample: tuple = ()
    message: str = ""


@dataclass(frozen=True)
class ValidationReport:
    level: str
    findings: tuple

    @property
    def errors(self) -> list[Finding]:
        return [f for f in self.findings if f.status == "error"]

    @property
    def warnings(self) -> list[Finding]:
        return [f for f in self.findings if f.status == "warning"]

    def status_of(self, law: str) -> str | None:
        for f in self.findings:
            if f.law == law:
                return f.status
        return None

    def render(self) -> str:
        lines = [f"level: {self.level}"]
        for f in self.findings:
            line = f"{f.status:7} {f.law}"
            if f.counterexample:
                line += " at (" + ", ".join(f.counterexample) + ")"
            if f.message:
                line += f": {f.message}"
            lines.append(line)
        return "\n".join(lines)


def _table_errors(s: FinStructure) -> list[Finding]:
    n = s.size
    sig = s.signature
    errs = []
    if len(set(s.elements)) != n:
        errs.append(Finding("distinct-elements", "error", message="element ids repeat"))
    if n == 0:
        errs.append(Finding("nonempty", "error", message="no elements"))

    def in_range(v):
        return isinstance(v, int) and 0 <= v < n

    if sig.has_composition:
        if s.comp is None or len(s.comp) != n or any(len(row) != n for row in s.comp):
            errs.append(Finding("compose-total", "error", message="composition table is not total"))
        else:
            for i, row in enumerate(s.comp):
                for j, v in enumerate(row):
                    if not in_range(v):
                        errs.append(Finding("compose-total", "error", s.names((i, j)),
                                            "composition entry is not an element"))
    elif s.comp is not None:
        errs.append(Finding("signature", "error", message="composition table without composition"))
    for op, table in (("D", s.dmap), ("R", s.rmap), ("conv", s.cmap)):
        if op in sig.unary:
            if table is None or len(table) != n:
                errs.append(Finding(f"{op}-total", "error", message=f"{op} table is not total"))
            else:
                for i, v in enumerate(table):
                    if not in_range(v):
                        errs.append(Finding(f"{op}-total", "error", s.names((i,)),
                                            f"{op} value is not an element"))
        elif table is not None:
            errs.append(Finding("signature", "error", message=f"{op} table outside the signature"))
    consts = dict(s.consts)
    for c in sorted(sig.constants):
        if c not in consts or not in_range(consts[c]):
            errs.append(Finding(f"const-{c}", "error", message=f"constant {c} not assigned"))
    for c in sorted(set(consts) - set(sig.constants)):
        errs.append(Finding("signature", "error", message=f"constant {c} outside the signature"))
    return errs


def _order_errors(s: FinStructure) -> list[Finding]:
    errs = []
    if not s.signature.order:
        if s.leq is not None:
            errs.append(Finding("signature", "error", message="order given without le"))
        return errs
    if s.leq is None:
        return [Finding("order-present", "error", message="order missing")]
    n = s.size
    leq = s.leq
    for i in range(n):
        if (i, i) not in leq:
            errs.append(Finding("order-reflexive", "error", s.names((i,)), "order not reflexive"))
            break
    for a, b in sorted(leq):
        if a != b and (b, a) in leq:
            errs.append(Finding("order-antisymmetric", "error", s.names((a, b)),
                                "order not antisymmetric"))
            break
    succ = {}
    for a, b in leq:
        succ.setdefault(a, set()).add(b)
    bad = next(((a, b, c) for a, b in sorted(leq) for c in sorted(succ.get(b, ()))
                if (a, c) not in leq), None)
    if bad:
        errs.append(Finding("order-transitive", "error", s.names(bad), "order not transitive"))
    return errs


def validate_structure(s: FinStructure) -> ValidationReport:
    findings = _table_errors(s)
    if not findings:
        findings += _order_errors(s)
        if "conv" in s.signature.unary:
            cex = check_equation(s, "conv-involution", limit=1)
            findings.append(Finding("conv-involution", "error" if cex else "ok",
                                    cex[0] if cex else (),
                                    "converse is not an involution" if cex else ""))
    if not any(f.status == "error" for f in findings):
        for name in LINT_LAWS:
            law = LAWS[name]
            if not law_applies(s, law):
                continue
            cex = check_equation(s, law, limit=1)
            findings.append(Finding(name, "warning" if cex else "ok", cex[0] if cex else ()))
    if any(f.status == "error" for f in findings):
        level = "errors"
    elif any(f.status == "warning" for f in findings):
        level = "warnings"
    else:
        level = "ok"
    return ValidationReport(level, tuple(findings))


# -- proper structures --------------------------------------------------------

def abstract_proper(rels: Iterable[Rel], signature: Signature,
                    name: str = "proper") -> tuple[FinStructure, dict]:
    """Read the tables of a proper structure off its relations.

    Elements are named ``r0, r1, ...`` in the order of ``relcore.sort_key``.
    Returns the structure and the map from element id to relation.
    """
    rels = sorted(set(rels), key=relcore.sort_key)
    if not rels:
        raise StructureError("no relations")
    size = rels[0].size
    pos = {r: i for i, r in enumerate(rels)}

    def look(r, what):
        try:
            return pos[r]
        except KeyError:
            raise NotClosed(f"set not closed under {what}: {r} missing") from None

    comp = None
    if signature.has_composition:
        comp = tuple(
            tuple(look(relcore.compose(a, b, signature.composition), signature.composition)
                  for b in rels)
            for a in rels)
    tables = {}
    for op in ("D", "R", "conv"):
        tables[op] = (tuple(look(relcore.apply_unary(op, r), op) for r in rels)
                      if op in signature.unary else None)
    leq = None
    if signature.order:
        leq = frozenset((i, j) for i, a in enumerate(rels) for j, b in enumerate(rels)
                        if a.issubset(b))
    consts = {c: look(relcore.constant_rel(c, size), c) for c in signature.constants}
    names = tuple(f"r{i}" for i in range(len(rels)))
    s = FinStructure(name, signature, names, comp, tables["D"], tables["R"], tables["conv"],
                     leq, consts)
    return s, dict(zip(names, rels))


def forced_partial_functions(s: FinStructure) -> set[str]:
    """Elements every representation must send to a partial function.

    Domain/range elements, elements below the identity constant, and any
    ``R(a)∘b`` with ``D(a∘b) = a∘b``.
    """
    sig = s.signature
    if not ({"D", "R"} <= sig.unary and sig.has_composition):
        raise StructureError("forced partial functions need D, R and composition")
    out = set(s.dr_image)
    ident = s.const("id")
    if ident is not None and sig.order:
        out.update(f for f in range(s.size) if s.le(f, ident))
    for a in range(s.size):
        ra = s.R(a)
        for b in range(s.size):
            ab = s.mul(a, b)
            if s.D(ab) == ab:
                out.add(s.mul(ra, b))
    return set(s.names(sorted(out)))
