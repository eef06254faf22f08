"""Line-oriented text format for finite structures.

::

    structure <name>
    signature compose=<angelic|demonic|none> [D] [R] [conv] [le] [zero] [one] [id]
    elements <id> <id> ...
    domain <x> = <y>
    range <x> = <y>
    converse <x> = <y>
    compose <x> <y> = <z>
    default compose = <z>
    le <x> <y>
    const zero|one|id = <x>
    end

``#`` starts a comment.  ``le`` lines list the order without its
reflexive pairs; no closure is applied.
"""

from __future__ import annotations

import re
from collections import Counter

from relrep.algebra import FinStructure
from relrep.signature import CONSTANTS, Signature, SignatureError

_TOKEN = re.compile(r"=|[^\s=#]+")


class StructureParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class _Tok(str):
    col: int


def _tokenize(line: str) -> list[_Tok]:
    code = line.split("#", 1)[0]
    out = []
    for m in _TOKEN.finditer(code):
        t = _Tok(m.group())
        t.col = m.start() + 1
        out.append(t)
    return out


_UNARY_KEYWORDS = {"domain": "D", "range": "R", "converse": "conv"}
_SIG_FLAGS = {"D", "R", "conv", "le", *CONSTANTS}


class _Parser:
    def __init__(self):
        self.name = None
        self.signature = None
        self.elements: list[str] = []
        self.index: dict[str, int] = {}
        self.unary = {"D": {}, "R": {}, "conv": {}}
        self.comp: dict[tuple[int, int], int] = {}
        self.default = None
        self.leq: set[tuple[int, int]] = set()
        self.consts: dict[str, int] = {}
        self.done = False
        self.lineno = 0
        self.end_col = 1

    def fail(self, msg, col=1):
        raise StructureParseError(msg, self.lineno, col)

    def element(self, tok):
        try:
            return self.index[tok]
        except KeyError:
            self.fail(f"unknown element {tok!r}", tok.col)

    def expect(self, toks, n, shape):
        if len(toks) != n:
            col = toks[min(len(toks), n) - 1].col if toks else 1
            self.fail(f"expected: {shape}", col)

    def need_eq(self, tok, shape):
        if tok != "=":
            self.fail(f"expected '=' ({shape})", tok.col)

    def set_entry(self, table, key, value, what, col):
        old = table.get(key)
        if old is not None and old != value:
            self.fail(f"conflicting duplicate {what} entry", col)
        table[key] = value

    def line(self, toks):
        head = toks[0]
        if self.done:
            self.fail("content after 'end'", head.col)
        if self.name is None and head != "structure":
            self.fail("expected 'structure <name>' first", head.col)
        if head == "structure":
            if self.name is not None:
                self.fail("duplicate 'structure' line", head.col)
            self.expect(toks, 2, "structure <name>")
            self.name = str(toks[1])
        elif head == "signature":
            self.signature_line(toks)
        elif head == "elements":
            if self.signature is None:
                self.fail("'signature' must precede 'elements'", head.col)
            for t in toks[1:]:
                if t == "=":
                    self.fail("'=' is not an element id", t.col)
                if t in self.index:
                    self.fail(f"duplicate element {t!r}", t.col)
                self.index[str(t)] = len(self.elements)
                self.elements.append(str(t))
        elif head in _UNARY_KEYWORDS:
            op = _UNARY_KEYWORDS[head]
            self.require(op in self.signature.unary, f"{op} is not in the signature", head)
            shape = f"{head} <x> = <y>"
            self.expect(toks, 4, shape)
            self.need_eq(toks[2], shape)
            x, y = self.element(toks[1]), self.element(toks[3])
            self.set_entry(self.unary[op], x, y, head, toks[3].col)
        elif head == "compose":
            self.require(self.signature.has_composition, "composition is not in the signature", head)
            if len(toks) > 1 and toks[1] == "=":
                self.fail("expected: compose <x> <y> = <z>", toks[1].col)
            shape = "compose <x> <y> = <z>"
            self.expect(toks, 5, shape)
            self.need_eq(toks[3], shape)
            x, y, z = self.element(toks[1]), self.element(toks[2]), self.element(toks[4])
            self.set_entry(self.comp, (x, y), z, "compose", toks[4].col)
        elif head == "default":
            self.require(self.signature.has_composition, "composition is not in the signature", head)
            shape = "default compose = <z>"
            self.expect(toks, 4, shape)
            if toks[1] != "compose":
                self.fail(f"expected: {shape}", toks[1].col)
            self.need_eq(toks[2], shape)
            z = self.element(toks[3])
            if self.default is not None and self.default != z:
                self.fail("conflicting default compose", toks[3].col)
            self.default = z
        elif head == "le":
            self.require(self.signature.order, "le is not in the signature", head)
            self.expect(toks, 3, "le <x> <y>")
            self.leq.add((self.element(toks[1]), self.element(toks[2])))
        elif head == "const":
            shape = "const <zero|one|id> = <x>"
            self.expect(toks, 4, shape)
            name = str(toks[1])
            if name not in CONSTANTS:
                self.fail(f"unknown constant {name!r}", toks[1].col)
            self.require(name in self.signature.constants, f"constant {name} is not in the signature",
                         toks[1])
            self.need_eq(toks[2], shape)
            self.set_entry(self.consts, name, self.element(toks[3]), "const", toks[3].col)
        elif head == "end":
            self.expect(toks, 1, "end")
            self.done = True
            self.end_col = head.col
        else:
            self.fail(f"unknown directive {head!r}", head.col)

    def require(self, cond, msg, tok):
        if self.signature is None:
            self.fail("'signature' must come first", tok.col)
        if not self.elements:
            self.fail("'elements' must precede tables", tok.col)
        if not cond:
            self.fail(msg, tok.col)

    def signature_line(self, toks):
        if self.signature is not None:
            self.fail("duplicate 'signature' line", toks[0].col)
        if len(toks) < 4 or toks[1] != "compose" or toks[2] != "=":
            self.fail("expected: signature compose=<kind> [flags]", toks[0].col)
        flags = set()
        for t in toks[4:]:
            if t not in _SIG_FLAGS:
                self.fail(f"unknown signature flag {t!r}", t.col)
            flags.add(str(t))
        try:
            self.signature = Signature(
                composition=str(toks[3]),
                unary=flags & {"D", "R", "conv"},
                order="le" in flags,
                constants=flags & set(CONSTANTS),
            )
        except SignatureError as e:
            self.fail(str(e), toks[3].col)

    def finish(self) -> FinStructure:
        if not self.done:
            self.fail("missing 'end'")
        if self.signature is None or not self.elements:
            self.fail("structure needs a signature and elements", self.end_col)
        n = len(self.elements)
        sig = self.signature
        names = self.elements
        comp = None
        if sig.has_composition:
            rows = []
            for x in range(n):
                row = []
                for y in range(n):
                    z = self.comp.get((x, y), self.default)
                    if z is None:
                        self.fail(f"missing compose {names[x]} {names[y]} and no default compose",
                                  self.end_col)
                    row.append(z)
                rows.append(tuple(row))
            comp = tuple(rows)
        tables = {}
        keyword = {v: k for k, v in _UNARY_KEYWORDS.items()}
        for op in ("D", "R", "conv"):
            if op not in sig.unary:
                tables[op] = None
                continue
            table = self.unary[op]
            missing = [names[x] for x in range(n) if x not in table]
            if missing:
                self.fail(f"missing {keyword[op]} for {missing[0]}", self.end_col)
            tables[op] = tuple(table[x] for x in range(n))
        for c in sorted(sig.constants):
            if c not in self.consts:
                self.fail(f"missing const {c}", self.end_col)
        leq = None
        if sig.order:
            leq = frozenset(self.leq | {(i, i) for i in range(n)})
        return FinStructure(self.name, sig, tuple(names), comp, tables["D"], tables["R"],
                            tables["conv"], leq, self.consts)


def parse_structure(text: str) -> FinStructure:
    p = _Parser()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        p.lineno = lineno
        toks = _tokenize(raw)
        if toks:
            p.line(toks)
    p.lineno = max(p.lineno, 1)
    return p.finish()


def serialize_structure(s: FinStructure) -> str:
    """Render ``s`` in the structure format; ``parse_structure`` inverts it."""
    el = s.elements
    out = [f"structure {s.name}", f"signature {s.signature}", "elements " + " ".join(el)]
    for kw, table in (("domain", s.dmap), ("range", s.rmap), ("converse", s.cmap)):
        if table is not None:
            out += [f"{kw} {el[x]} = {el[y]}" for x, y in enumerate(table)]
    if s.comp is not None:
        counts = Counter(v for row in s.comp for v in row)
        default = min(counts, key=lambda v: (-counts[v], v))
        out.append(f"default compose = {el[default]}")
        for x, row in enumerate(s.comp):
            for y, z in enumerate(row):
                if z != default:
                    out.append(f"compose {el[x]} {el[y]} = {el[z]}")
    if s.leq is not None:
        out += [f"le {el[a]} {el[b]}" for a, b in sorted(s.leq) if a != b]
    for name, v in s.consts:
        out.append(f"const {name} = {el[v]}")
    out.append("end")
    return "\n".join(out) + "\n"
