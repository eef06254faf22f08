"""Networks: a node set with asserted (top) and forbidden (bot) edge labels."""

from __future__ import annotations

import itertools
import json
import math

from relrep.algebra import FinStructure

FRESH = "fresh"


class Network:
    """Immutable network; labels are element indices of some structure.

    ``top`` and ``bot`` map node pairs to frozensets; missing pairs carry
    the empty label.
    """

    __slots__ = ("nodes", "top", "bot", "_key")

    def __init__(self, nodes, top=None, bot=None):
        self.nodes = tuple(sorted(set(nodes)))
        self.top = {k: frozenset(v) for k, v in (top or {}).items() if v}
        self.bot = {k: frozenset(v) for k, v in (bot or {}).items() if v}
        self._key = None
        known = set(self.nodes)
        for x, y in list(self.top) + list(self.bot):
            if x not in known or y not in known:
                raise ValueError(f"label on ({x}, {y}) outside the node set")

    def key(self) -> tuple:
        if self._key is None:
            self._key = (self.nodes, tuple(sorted((k, tuple(sorted(v))) for k, v in self.top.items())),
                         tuple(sorted((k, tuple(sorted(v))) for k, v in self.bot.items())))
        return self._key

    def __eq__(self, other):
        return isinstance(other, Network) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Network(nodes={list(self.nodes)}, top={self.top}, bot={self.bot})"

    def tops(self, x, y) -> frozenset:
        return self.top.get((x, y), frozenset())

    def bots(self, x, y) -> frozenset:
        return self.bot.get((x, y), frozenset())

    def fresh_id(self) -> int:
        return self.nodes[-1] + 1 if self.nodes else 0

    def resolve(self, node):
        """Map ``FRESH`` to the id a fresh node would get; that id itself is accepted too."""
        if node == FRESH:
            return self.fresh_id()
        if node not in self.nodes and node != self.fresh_id():
            raise ValueError(f"unknown node {node!r}")
        return node

    def _add(self, which, x, y, a) -> Network:
        x, y = self.resolve(x), self.resolve(y)
        top = dict(self.top)
        bot = dict(self.bot)
        table = top if which == "top" else bot
        table[(x, y)] = table.get((x, y), frozenset()) | {a}
        return Network(self.nodes + (x, y), top, bot)


def add_top(n: Network, x, y, a: int) -> Network:
    return n._add("top", x, y, a)


def add_bot(n: Network, x, y, a: int) -> Network:
    return n._add("bot", x, y, a)


def net_ref(a: int, b: int) -> Network:
    return Network([0], {(0, 0): {a}}, {(0, 0): {b}})


def net_nref(a: int, b: int) -> Network:
    return Network([0, 1], {(0, 1): {a}}, {(0, 1): {b}})


def init_networks(a: int, b: int) -> list[Network]:
    """The four starting options for the pair ``a ≠ b``, in a fixed order."""
    return [net_ref(a, b), net_nref(a, b), net_ref(b, a), net_nref(b, a)]


def consistent(n: Network, s: FinStructure) -> bool:
    dr = s.dr_image
    for (x, y), labels in n.top.items():
        if labels & n.bots(x, y):
            return False
        if x != y and labels & dr:
            return False
    return True


def extends(n1: Network, n2: Network) -> bool:
    """``n1 ⊆ n2``: nodes contained and every label contained."""
    if not set(n1.nodes) <= set(n2.nodes):
        return False
    return (all(v <= n2.tops(*k) for k, v in n1.top.items())
            and all(v <= n2.bots(*k) for k, v in n1.bot.items()))


# -- canonical form ---------------------------------------------------------------

_PERM_LIMIT = 5040


def canonical_key(n: Network) -> tuple:
    """A key equal for isomorphic networks (node ids are nominal).

    Colour refinement orders the nodes; ties are broken by trying every
    order within colour classes when that is cheap, else by node id.  The
    key always describes an isomorphic copy, so a missed tie only costs
    memo hits.
    """
    nodes = n.nodes
    if not nodes:
        return ((), ())

    def lab(x, y):
        return (tuple(sorted(n.tops(x, y))), tuple(sorted(n.bots(x, y))))

    colour = {x: lab(x, x) for x in nodes}
    while True:
        sig = {}
        for x in nodes:
            out = sorted((colour[y], lab(x, y)) for y in nodes if y != x and lab(x, y) != ((), ()))
            inc = sorted((colour[y], lab(y, x)) for y in nodes if y != x and lab(y, x) != ((), ()))
            sig[x] = (colour[x], tuple(out), tuple(inc))
        ranks = {v: i for i, v in enumerate(sorted(set(sig.values())))}
        new = {x: ranks[sig[x]] for x in nodes}
        if len(set(new.values())) == len(set(colour.values())):
            colour = new
            break
        colour = new
    classes = {}
    for x in nodes:
        classes.setdefault(colour[x], []).append(x)
    groups = [classes[c] for c in sorted(classes)]

    def encode(order):
        pos = {x: i for i, x in enumerate(order)}
        edges = sorted((pos[x], pos[y], lab(x, y)) for x in nodes for y in nodes
                       if lab(x, y) != ((), ()))
        return (len(order), tuple(edges))

    if math.prod(math.factorial(len(g)) for g in groups) > _PERM_LIMIT:
        return encode([x for g in groups for x in g])
    best = None
    for perms in itertools.product(*(itertools.permutations(g) for g in groups)):
        code = encode([x for p in perms for x in p])
        if best is None or code < best:
            best = code
    return best


# -- export -------------------------------------------------------------------------

def network_to_json(n: Network, s: FinStructure) -> dict:
    names = s.elements
    return {
        "nodes": list(n.nodes),
        "top": [[x, y, [names[a] for a in sorted(v)]] for (x, y), v in sorted(n.top.items())],
        "bot": [[x, y, [names[a] for a in sorted(v)]] for (x, y), v in sorted(n.bot.items())],
    }


def network_from_json(data: dict, s: FinStructure) -> Network:
    def table(rows):
        return {(int(x), int(y)): {s.id_of(a) for a in labels} for x, y, labels in rows}
    return Network([int(x) for x in data["nodes"]], table(data.get("top", [])),
                   table(data.get("bot", [])))


def dumps_network(n: Network, s: FinStructure) -> str:
    return json.dumps(network_to_json(n, s))


def dot_graph(name: str, nodes, solid: dict, dashed: dict | None = None) -> str:
    """DOT text; ``solid``/``dashed`` map node pairs to label name lists."""
    lines = [f'digraph "{name}" {{']
    lines += [f'  n{x} [label="{x}"];' for x in nodes]
    for style, table in (("solid", solid), ("dashed", dashed or {})):
        for (x, y), labels in sorted(table.items()):
            lines.append(f'  n{x} -> n{y} [style={style}, label="{", ".join(labels)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def network_to_dot(n: Network, s: FinStructure, name: str = "network") -> str:
    """Solid edges carry top labels, dashed edges bot labels."""
    names = s.elements

    def named(table):
        return {k: [names[a] for a in sorted(v)] for k, v in table.items()}
    return dot_graph(name, n.nodes, named(n.top), named(n.bot))
