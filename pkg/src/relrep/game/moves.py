"""Challenges, responses and play states of the representation game."""

from __future__ import annotations

from dataclasses import dataclass, field

from relrep.algebra import FinStructure, StructureError
from relrep.game.network import FRESH, Network, add_bot, add_top, consistent, init_networks

KINDS = ("init", "witness", "composition_domain", "composition", "domain_range", "domain", "range")

# parameter layout per kind; x, y, z, w are nodes, a, b elements
PARAMS = {
    "init": ("a", "b"),
    "witness": ("x", "z", "a", "b"),
    "composition_domain": ("x", "y", "z", "a", "b"),
    "composition": ("x", "y", "z", "a", "b"),
    "domain_range": ("x", "y", "a"),
    "domain": ("x", "a"),
    "range": ("y", "a"),
}


class IllegalMove(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Challenge:
    kind: str
    args: tuple

    def __post_init__(self):
        if self.kind not in PARAMS:
            raise IllegalMove(f"unknown challenge kind {self.kind!r}")
        if len(self.args) != len(PARAMS[self.kind]):
            raise IllegalMove(f"{self.kind} takes {len(PARAMS[self.kind])} parameters")

    def get(self, name):
        return self.args[PARAMS[self.kind].index(name)]

    def to_json(self, s: FinStructure) -> dict:
        out = {"kind": self.kind}
        for p, v in zip(PARAMS[self.kind], self.args):
            out[p] = s.elements[v] if p in ("a", "b") else v
        return out

    def describe(self, s: FinStructure) -> str:
        parts = [s.elements[v] if p in ("a", "b") else str(v)
                 for p, v in zip(PARAMS[self.kind], self.args)]
        return " ".join([self.kind] + parts)


@dataclass(frozen=True)
class Response:
    """∃'s reply.

    ``init`` picks one of the four starting networks (ref[a,b], nref[a,b],
    ref[b,a], nref[b,a]); ``node`` is the node choice of witness, domain,
    range and the bottom branch of composition (an id or ``FRESH``);
    ``branch`` is ``"compose"`` or ``"bottom"`` for composition.
    ``extra`` lists further top labels ``(x, y, a)`` a non-conservative
    player adds after the mandated extension; ``FRESH`` there names the
    node this response created.
    """

    kind: str
    init: int | None = None
    node: object = None
    branch: str | None = None
    extra: tuple = ()

    def to_json(self, s: FinStructure) -> dict:
        out = {"kind": self.kind}
        if self.init is not None:
            out["init"] = self.init
        if self.branch is not None:
            out["branch"] = self.branch
        if self.node is not None:
            out["node"] = self.node
        if self.extra:
            out["extra"] = [[x, y, s.elements[a]] for x, y, a in self.extra]
        return out

    def describe(self) -> str:
        bits = [self.kind]
        if self.init is not None:
            bits.append(("ref[a,b]", "nref[a,b]", "ref[b,a]", "nref[b,a]")[self.init])
        if self.branch is not None:
            bits.append(self.branch)
        if self.node is not None:
            bits.append(f"node={self.node}")
        if self.extra:
            bits.append(f"+{len(self.extra)} labels")
        return " ".join(bits)


@dataclass(frozen=True)
class PlayState:
    structure: FinStructure = field(repr=False)
    network: Network | None
    moves_left: int


def _require_drs(s: FinStructure):
    sig = s.signature
    if sig.composition != "demonic" or not {"D", "R"} <= sig.unary:
        raise StructureError(f"the game needs D, R and demonic composition; got {sig}")


class Tables:
    """Inverse tables used to enumerate challenges quickly."""

    def __init__(self, s: FinStructure):
        _require_drs(s)
        n = s.size
        self.factors = [[] for _ in range(n)]  # c -> [(a, b)] with a*b = c
        self.right = {}  # (a, c) -> [b] with a*b = c
        for a in range(n):
            for b in range(n):
                c = s.mul(a, b)
                self.factors[c].append((a, b))
                self.right.setdefault((a, c), []).append(b)
        self.dpre = [[] for _ in range(n)]
        self.rpre = [[] for _ in range(n)]
        for a in range(n):
            self.dpre[s.D(a)].append(a)
            self.rpre[s.R(a)].append(a)


_TABLES: dict = {}


def tables_for(s: FinStructure) -> Tables:
    key = id(s)
    hit = _TABLES.get(key)
    if hit is None or hit[0] is not s:
        hit = (s, Tables(s))
        _TABLES[key] = hit
    return hit[1]


def init_challenges(s: FinStructure) -> list[Challenge]:
    return [Challenge("init", (a, b)) for a in range(s.size) for b in range(a + 1, s.size)]


def challenges(s: FinStructure, n: Network, prune: bool = False) -> list[Challenge]:
    """Every challenge ∀ may pose on ``n``, in kind order then parameter order.

    With ``prune``, challenges that some response answers without changing
    the network are dropped.
    """
    t = tables_for(s)
    out = []
    edges = sorted(n.top.items())
    by_source = {}
    for (x, y), labels in edges:
        by_source.setdefault(x, []).append((y, labels))
    for (x, z), labels in edges:
        for c in sorted(labels):
            for a, b in t.factors[c]:
                if prune and any(a in n.tops(x, y) and b in n.tops(y, z) for y in n.nodes):
                    continue
                out.append(Challenge("witness", (x, z, a, b)))
    for (x, y), labels in edges:
        for a in sorted(labels):
            for z, zl in by_source[x]:
                for c in sorted(zl):
                    for b in t.right.get((a, c), ()):
                        if prune and s.D(b) in n.tops(y, y):
                            continue
                        out.append(Challenge("composition_domain", (x, y, z, a, b)))
    for (x, y), labels in edges:
        for a in sorted(labels):
            for z, zl in by_source.get(y, ()):
                for b in sorted(zl):
                    if prune and (s.mul(a, b) in n.tops(x, z) or any(
                            a in n.tops(x, w) and s.D(b) in n.bots(w, w) for w in n.nodes)):
                        continue
                    out.append(Challenge("composition", (x, y, z, a, b)))
    for (x, y), labels in edges:
        for a in sorted(labels):
            if prune and s.D(a) in n.tops(x, x) and s.R(a) in n.tops(y, y):
                continue
            out.append(Challenge("domain_range", (x, y, a)))
    for x in n.nodes:
        for e in sorted(n.tops(x, x)):
            for a in t.dpre[e]:
                if prune and any(a in n.tops(x, y) for y in n.nodes):
                    continue
                out.append(Challenge("domain", (x, a)))
    for y in n.nodes:
        for e in sorted(n.tops(y, y)):
            for a in t.rpre[e]:
                if prune and any(a in n.tops(x, y) for x in n.nodes):
                    continue
                out.append(Challenge("range", (y, a)))
    return out


def legal_challenges(state: PlayState, prune: bool = False) -> list[Challenge]:
    if state.network is None:
        return init_challenges(state.structure)
    return challenges(state.structure, state.network, prune)


def is_legal(s: FinStructure, n: Network | None, ch: Challenge) -> bool:
    """Check the side conditions of ``ch`` directly."""
    if n is None:
        a, b = ch.args if ch.kind == "init" else (None, None)
        return ch.kind == "init" and a != b and 0 <= a < s.size and 0 <= b < s.size
    if ch.kind == "init":
        return False
    nodes = set(n.nodes)
    p = dict(zip(PARAMS[ch.kind], ch.args))
    if any(p[k] not in nodes for k in ("x", "y", "z") if k in p):
        return False
    if any(not (isinstance(p[k], int) and 0 <= p[k] < s.size) for k in ("a", "b") if k in p):
        return False
    k = ch.kind
    if k == "witness":
        return s.mul(p["a"], p["b"]) in n.tops(p["x"], p["z"])
    if k == "composition_domain":
        return p["a"] in n.tops(p["x"], p["y"]) and s.mul(p["a"], p["b"]) in n.tops(p["x"], p["z"])
    if k == "composition":
        return p["a"] in n.tops(p["x"], p["y"]) and p["b"] in n.tops(p["y"], p["z"])
    if k == "domain_range":
        return p["a"] in n.tops(p["x"], p["y"])
    if k == "domain":
        return s.D(p["a"]) in n.tops(p["x"], p["x"])
    if k == "range":
        return s.R(p["a"]) in n.tops(p["y"], p["y"])
    return False


def responses(s: FinStructure, n: Network | None, ch: Challenge) -> list[Response]:
    """Every conservative response, existing nodes before ``FRESH``."""
    k = ch.kind
    if k == "init":
        return [Response("init", init=i) for i in range(4)]
    choices = list(n.nodes) + [FRESH]
    if k in ("witness", "domain", "range"):
        return [Response(k, node=v) for v in choices]
    if k == "composition":
        return [Response(k, branch="compose")] + [Response(k, branch="bottom", node=v) for v in choices]
    return [Response(k)]


def apply(s: FinStructure, n: Network | None, ch: Challenge, r: Response) -> Network:
    """The network ``r`` returns for ``ch`` on ``n``."""
    if r.kind != ch.kind:
        raise IllegalMove(f"response {r.kind} does not answer {ch.kind}")
    k = ch.kind
    if k == "init":
        if r.init not in range(4):
            raise IllegalMove("init response must pick one of the four networks")
        out = init_networks(*ch.args)[r.init]
        return _extras(out, r.extra, None)

    def node(v):
        try:
            return n.resolve(v)
        except ValueError:
            raise IllegalMove(f"node choice {v!r} is neither a node nor fresh") from None

    p = dict(zip(PARAMS[k], ch.args))
    fresh = None
    if k == "witness":
        y = node(r.node)
        fresh = y if r.node == FRESH else None
        out = add_top(add_top(n, p["x"], y, p["a"]), y, p["z"], p["b"])
    elif k == "composition_domain":
        out = add_top(n, p["y"], p["y"], s.D(p["b"]))
    elif k == "composition":
        if r.branch == "compose":
            out = add_top(n, p["x"], p["z"], s.mul(p["a"], p["b"]))
        elif r.branch == "bottom":
            w = node(r.node)
            fresh = w if r.node == FRESH else None
            out = add_bot(add_top(n, p["x"], w, p["a"]), w, w, s.D(p["b"]))
        else:
            raise IllegalMove("composition response needs branch 'compose' or 'bottom'")
    elif k == "domain_range":
        out = add_top(add_top(n, p["x"], p["x"], s.D(p["a"])), p["y"], p["y"], s.R(p["a"]))
    elif k == "domain":
        y = node(r.node)
        fresh = y if r.node == FRESH else None
        out = add_top(n, p["x"], y, p["a"])
    elif k == "range":
        x = node(r.node)
        fresh = x if r.node == FRESH else None
        out = add_top(n, x, p["y"], p["a"])
    else:
        raise IllegalMove(f"unknown challenge kind {k!r}")
    return _extras(out, r.extra, fresh)


def _extras(n: Network, extra, fresh) -> Network:
    for x, y, a in extra:
        x = fresh if x == FRESH else x
        y = fresh if y == FRESH else y
        if x not in n.nodes or y not in n.nodes:
            raise IllegalMove("extra labels may only use existing nodes or the response's fresh node")
        n = add_top(n, x, y, a)
    return n


def respond(state: PlayState, ch: Challenge, r: Response) -> PlayState:
    """Apply ``r`` to ``ch``; the init move does not consume a move."""
    s = state.structure
    if not is_legal(s, state.network, ch):
        raise IllegalMove(f"challenge {ch.describe(s)} is not legal here")
    net = apply(s, state.network, ch, r)
    left = state.moves_left if ch.kind == "init" else state.moves_left - 1
    return PlayState(s, net, left)


def state_consistent(state: PlayState) -> bool:
    return state.network is None or consistent(state.network, state.structure)


def challenge_from_json(s: FinStructure, data: dict) -> Challenge:
    kind = data.get("kind")
    if kind not in PARAMS:
        raise IllegalMove(f"unknown challenge kind {kind!r}")
    args = []
    for p in PARAMS[kind]:
        if p not in data:
            raise IllegalMove(f"{kind} challenge lacks {p!r}")
        args.append(s.id_of(data[p]) if p in ("a", "b") else int(data[p]))
    return Challenge(kind, tuple(args))


def response_from_json(s: FinStructure, data: dict) -> Response:
    node = data.get("node")
    if node is not None and node != FRESH:
        node = int(node)
    extra = tuple((x if x == FRESH else int(x), y if y == FRESH else int(y), s.id_of(a))
                  for x, y, a in data.get("extra", ()))
    return Response(data["kind"], data.get("init"), node, data.get("branch"), extra)


def parse_challenge(s: FinStructure, text: str) -> Challenge:
    """``"witness 0 1 a_0 b_0"``: kind, then nodes and element names in parameter order."""
    words = text.split()
    if not words or words[0] not in PARAMS:
        raise IllegalMove(f"expected one of {', '.join(PARAMS)}")
    kind, rest = words[0], words[1:]
    if len(rest) != len(PARAMS[kind]):
        raise IllegalMove(f"{kind} takes: {' '.join(PARAMS[kind])}")
    args = []
    for p, w in zip(PARAMS[kind], rest):
        if p in ("a", "b"):
            args.append(s.id_of(w))
        else:
            try:
                args.append(int(w))
            except ValueError:
                raise IllegalMove(f"node {w!r} is not a number") from None
    return Challenge(kind, tuple(args))


def parse_response(ch: Challenge, text: str) -> Response:
    """``init <0-3>``, ``node <id|fresh>``, ``compose``, ``bottom <id|fresh>`` or ``ok``."""
    words = text.split()

    def node(w):
        if w == FRESH:
            return FRESH
        try:
            return int(w)
        except ValueError:
            raise IllegalMove(f"node {w!r} is neither a number nor fresh") from None

    k = ch.kind
    if k == "init" and len(words) == 2 and words[0] == "init" and words[1] in "0123":
        return Response(k, init=int(words[1]))
    if k in ("witness", "domain", "range") and len(words) == 2 and words[0] == "node":
        return Response(k, node=node(words[1]))
    if k == "composition" and words == ["compose"]:
        return Response(k, branch="compose")
    if k == "composition" and len(words) == 2 and words[0] == "bottom":
        return Response(k, branch="bottom", node=node(words[1]))
    if k in ("composition_domain", "domain_range") and words == ["ok"]:
        return Response(k)
    raise IllegalMove(f"not a reply to {k}; type help")
