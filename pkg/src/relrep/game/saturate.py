"""Capped saturation: play ∀'s every challenge until networks close, then read off θ."""

from __future__ import annotations

from relrep.algebra import FinStructure
from relrep.game.moves import Challenge, apply, challenges, responses, tables_for
from relrep.game.network import Network, consistent, init_networks
from relrep.relcore import Rel
from relrep.repbuild import Inconclusive, RepMap, RepresentationError, verify_representation

# closure challenges first: they never add nodes
_ORDER = {"composition_domain": 0, "composition": 1, "domain_range": 2,
          "witness": 3, "domain": 4, "range": 5}


class SaturationFailed(RuntimeError):
    """Every explored choice of ∃ reached an inconsistency (not a proof of anything)."""


def next_challenge(s: FinStructure, n: Network) -> Challenge | None:
    """The first challenge with no free reply, closure kinds first."""
    open_ = challenges(s, n, prune=True)
    if not open_:
        return None
    return min(open_, key=lambda ch: (_ORDER[ch.kind], ch.args))


def separates(n: Network, a: int, b: int) -> bool:
    return any((a in labels) != (b in labels) for labels in n.top.values())


class _Budget:
    def __init__(self, steps):
        self.left = steps
        self.capped = False


def _close(s: FinStructure, start: Network, node_cap: int, budget: _Budget):
    """Depth-first search over ∃'s replies for a closed consistent extension of ``start``."""
    dead = set()
    stack = [[start, None]]
    while stack:
        frame = stack[-1]
        net, options = frame
        if options is None:
            if not consistent(net, s) or net in dead:
                stack.pop()
                continue
            ch = next_challenge(s, net)
            if ch is None:
                return net
            frame[1] = options = [(ch, r) for r in responses(s, net, ch)]
        if not options:
            dead.add(net)
            stack.pop()
            continue
        if budget.left <= 0:
            budget.capped = True
            return None
        budget.left -= 1
        ch, r = options.pop(0)
        child = apply(s, net, ch, r)
        if len(child.nodes) > node_cap:
            budget.capped = True
            continue
        stack.append([child, None])
    return None


def saturate_and_extract(s: FinStructure, node_cap: int = 12, step_cap: int = 20000) -> RepMap:
    """A representation read off closed networks, one per separated pair.

    Raises ``Inconclusive`` when a cap stops the search and
    ``SaturationFailed`` when every explored line became inconsistent.
    """
    tables_for(s)
    budget = _Budget(step_cap)
    closed = []
    if s.size == 1:
        # no pair to separate; a lone loop labelled by the element
        start = Network([0], {(0, 0): {0}})
        net = _close(s, start, node_cap, budget)
        if net is None:
            raise _failure(budget, "the one-element network does not close")
        closed.append(net)
    for a in range(s.size):
        for b in range(a + 1, s.size):
            if any(separates(net, a, b) for net in closed):
                continue
            starts = init_networks(a, b)
            for k, start in enumerate(starts):
                # each remaining opening gets an equal share of the steps left
                share = _Budget(budget.left // (len(starts) - k))
                net = _close(s, start, node_cap, share)
                budget.left -= budget.left // (len(starts) - k) - share.left
                budget.capped |= share.capped
                if net is not None:
                    closed.append(net)
                    break
            if not closed or not separates(closed[-1], a, b):
                names = s.names((a, b))
                raise _failure(budget, f"no closed network separates {names[0]} and {names[1]}")
    rep = union_rep(s, closed)
    bad = verify_representation(rep)
    if bad:
        raise RepresentationError("saturation produced an invalid representation", bad)
    return rep


def _failure(budget: _Budget, message: str):
    if budget.capped:
        return Inconclusive(f"{message} within the caps")
    return SaturationFailed(message)


def union_rep(s: FinStructure, nets) -> RepMap:
    """θ over the disjoint union of the networks: (x,y) ∈ a^θ iff a ∈ ⊤(x,y)."""
    pairs = {e: [] for e in range(s.size)}
    offset = 0
    for net in nets:
        pos = {x: offset + i for i, x in enumerate(net.nodes)}
        for (x, y), labels in net.top.items():
            for e in labels:
                pairs[e].append((pos[x], pos[y]))
        offset += len(net.nodes)
    assignment = {s.elements[e]: Rel.from_pairs(offset, ps) for e, ps in pairs.items()}
    return RepMap(s, offset, assignment)
