"""The S_n family: non-representable {D,R,*}-structures on which ∃ survives n moves."""

from __future__ import annotations

from relrep.algebra import FinStructure
from relrep.game.moves import Response, apply
from relrep.game.network import FRESH, Network, consistent
from relrep.game.strategy import ExistsStrategy, FirstConsistent
from relrep.signature import DRS

PER_INDEX = ("m", "eps", "a", "b", "c", "d", "cd", "ac", "acd", "cdb", "db", "ab")

# domain and range of the non domain-range elements, as per-index families
_DOMAIN = {"a": "d", "ac": "d", "acd": "d", "ab": "d",
           "c": "m", "b": "m", "cdb": "m", "cd": "m",
           "d": "eps", "db": "eps"}
_RANGE = {"a": "m", "d": "m", "cd": "m", "acd": "m",
          "c": "eps", "ac": "eps",
          "ab": "r", "cdb": "r", "db": "r", "b": "r"}

# x_i * y_i = z_i
_SAME = [("d", "c", "eps"), ("c", "d", "cd"), ("cd", "cd", "cd"),
         ("cd", "c", "c"), ("d", "cd", "d"), ("a", "b", "ab"), ("a", "c", "ac"),
         ("a", "cd", "acd"), ("c", "db", "cdb"), ("d", "b", "db"), ("ac", "d", "acd"),
         ("acd", "c", "ac"), ("cd", "b", "cdb")]
# x_i * y_i = ab_{i+1}
_SHIFT = [("a", "cdb"), ("acd", "cdb"), ("ac", "db"), ("acd", "b")]


def sn_size(n: int) -> int:
    return 2 * n + 1


def el(family: str, i: int) -> str:
    return f"{family}_{i}"


def sn_elements(n: int) -> list[str]:
    N = sn_size(n)
    return ["0", "d", "r"] + [el(f, i) for i in range(N) for f in PER_INDEX]


def gen_sn(n: int) -> FinStructure:
    if n < 0:
        raise ValueError("n must be a natural number")
    N = sn_size(n)
    elements = sn_elements(n)
    dr = ["0", "d", "r"] + [el(f, i) for i in range(N) for f in ("m", "eps")]
    domain = {e: e for e in dr}
    range_ = {e: e for e in dr}

    def shared(name, i):
        return name if name in ("d", "r") else el(name, i)

    for i in range(N):
        for f, target in _DOMAIN.items():
            domain[el(f, i)] = shared(target, i)
        for f, target in _RANGE.items():
            range_[el(f, i)] = shared(target, i)
    table = {}
    for i in range(N):
        for x, y, z in _SAME:
            table[(el(x, i), el(y, i))] = el(z, i)
        for x, y in _SHIFT:
            table[(el(x, i), el(y, i))] = el("ab", (i + 1) % N)
    drset = set(dr)

    def compose(x, y):
        if x in drset and y in drset:
            return x if x == y else "0"
        if x in drset:
            return y if domain[y] == x else "0"
        if y in drset:
            return x if range_[x] == y else "0"
        return table.get((x, y), "0")

    return FinStructure.build(f"S_{n}", DRS, elements, compose=compose,
                              domain=domain, range_=range_)


# -- the scripted ∃ strategy -------------------------------------------------------

COMPANIONS = {"a": "acd", "b": "cdb", "m": "cd"}


def parse_el(name: str):
    """``"acd_3"`` -> ``("acd", 3)``; shared elements get index None."""
    fam, _, i = name.rpartition("_")
    return (fam, int(i)) if fam else (name, None)


class SnStrategy(ExistsStrategy):
    """∃'s strategy on S_n: conservative replies with node choices from the
    nonrepresentability argument, plus optional eager extras.

    ``companions`` lists the families whose companion label (``a`` -> ``acd``,
    ``b`` -> ``cdb``, ``m`` -> ``cd``) is added alongside; ``eager`` also
    closes ⊤ under nonzero compositions, domain-range and
    composition-domain after each reply.  A reply whose result would be
    inconsistent falls back to the first consistent conservative reply.
    """

    name = "sn"

    def __init__(self, n: int, companions=("a", "b"), eager: bool = False):
        self.n = n
        self.N = sn_size(n)
        self.companions = tuple(companions)
        self.eager = eager
        self.expected = tuple(sn_elements(n))

    def reset(self, s, n):
        self._check(s)

    def _check(self, s):
        if tuple(s.elements) != self.expected:
            raise ValueError(f"strategy for S_{self.n} asked to play on {s.name}")

    # helpers over the current structure
    def _fam(self, s, e):
        return parse_el(s.elements[e])

    def _id(self, s, fam, i):
        return s.id_of(el(fam, i))

    def partner(self, s, net, x, i):
        """The node y paired with ``x`` through c_i on (x,y) or d_i on (y,x)."""
        c, d = self._id(s, "c", i), self._id(s, "d", i)
        for y in net.nodes:
            if c in net.tops(x, y) or d in net.tops(y, x):
                return y
        return None

    def _owner(self, s, net, y, i):
        """The node x whose partner is ``y``."""
        for x in net.nodes:
            if x != y and self.partner(s, net, x, i) == y:
                return x
        return None

    def choose_init(self, s, a, b):
        fa, ia = self._fam(s, a)
        fb, ib = self._fam(s, b)
        pick = a
        forced = {("acd", "a"), ("cdb", "b"), ("cd", "m")}
        if fa == "0":
            pick = b
        elif fb == "0":
            pick = a
        elif (fa, fb) in forced and ia == ib:
            pick = a
        elif (fb, fa) in forced and ia == ib:
            pick = b
        elif fa == "ab" and fb == "ab":
            # top the one from which ∀ needs the most index steps to reach the other
            pick = a if (ib - ia) % self.N >= self.n + 1 else b
        reflexive = pick in s.dr_image
        if pick == a:
            return 0 if reflexive else 1
        return 2 if reflexive else 3

    def node_choice(self, s, net, ch):
        k = ch.kind
        a = ch.get("a")
        fam, i = self._fam(s, a)
        if k == "witness":
            x, z, b = ch.get("x"), ch.get("z"), ch.get("b")
            for y in net.nodes:
                if a in net.tops(x, y) and b in net.tops(y, z):
                    return y
            fb, ib = self._fam(s, b)
            if fam == "c":
                y = self.partner(s, net, x, i)
            elif fb == "d":
                y = self.partner(s, net, z, ib)
            else:
                y = None
            return FRESH if y is None else y
        if k == "domain":
            x = ch.get("x")
            for y in net.nodes:
                if a in net.tops(x, y):
                    return y
            y = None
            if fam == "c":
                y = self.partner(s, net, x, i)
            elif fam == "d":
                y = self._owner(s, net, x, i)
            return FRESH if y is None else y
        if k == "range":
            y = ch.get("y")
            for x in net.nodes:
                if a in net.tops(x, y):
                    return x
            x = None
            if fam == "d":
                x = self.partner(s, net, y, i)
            elif fam == "c":
                x = self._owner(s, net, y, i)
            return FRESH if x is None else x
        return None

    def closure(self, s, net):
        """``net`` with companion labels and, if eager, the closure rules applied."""
        zero = s.id_of("0")
        comp = {}
        for fam, partner in COMPANIONS.items():
            if fam in self.companions:
                for i in range(self.N):
                    comp[self._id(s, fam, i)] = self._id(s, partner, i)
        top = {k: set(v) for k, v in net.top.items()}
        changed = True
        while changed:
            changed = False
            adds = []
            for (x, y), labels in top.items():
                for e in labels:
                    if e in comp:
                        adds.append((x, y, comp[e]))
                    if self.eager:
                        adds.append((x, x, s.D(e)))
                        adds.append((y, y, s.R(e)))
            if self.eager:
                for (x, y), left in top.items():
                    for (y2, z), right in top.items():
                        if y2 != y:
                            continue
                        for e in left:
                            for f in right:
                                p = s.mul(e, f)
                                if p != zero:
                                    adds.append((x, z, p))
                for (x, y), left in top.items():
                    for (x2, z), far in top.items():
                        if x2 != x:
                            continue
                        for e in left:
                            for f in range(s.size):
                                if s.mul(e, f) in far and s.mul(e, f) != zero:
                                    adds.append((y, y, s.D(f)))
            for x, y, e in adds:
                cur = top.setdefault((x, y), set())
                if e not in cur:
                    cur.add(e)
                    changed = True
        return Network(net.nodes, top, net.bot)

    def _extras(self, before, after):
        return tuple(sorted((x, y, e) for (x, y), labels in after.top.items()
                            for e in labels - before.tops(x, y)))

    def respond(self, state, ch):
        s = state.structure
        self._check(s)
        net = state.network
        if ch.kind == "init":
            r = Response("init", init=self.choose_init(s, *ch.args))
        elif ch.kind == "composition":
            if s.mul(ch.get("a"), ch.get("b")) != s.id_of("0"):
                r = Response("composition", branch="compose")
            else:
                r = Response("composition", branch="bottom", node=FRESH)
        elif ch.kind in ("witness", "domain", "range"):
            r = Response(ch.kind, node=self.node_choice(s, net, ch))
        else:
            r = Response(ch.kind)
        plain = apply(s, net, ch, r)
        closed = self.closure(s, plain)
        if consistent(closed, s):
            extra = self._extras(plain, closed)
            return Response(r.kind, r.init, r.node, r.branch, extra)
        if consistent(plain, s):
            return r
        return FirstConsistent().respond(state, ch)


def sn_strategy(n: int, **options) -> SnStrategy:
    return SnStrategy(n, **options)
