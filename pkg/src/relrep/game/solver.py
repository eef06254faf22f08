"""Exact solver for the bounded game: AND over ∀'s challenges, OR over ∃'s replies."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor

from relrep.algebra import FinStructure
from relrep.game.moves import (Challenge, PlayState, apply, challenges, init_challenges,
                               responses, tables_for)
from relrep.game.network import Network, canonical_key, consistent
from relrep.repbuild import Inconclusive


class GameSolver:
    """Memoised evaluation of positions of the n-move game on ``s``.

    A position is a network together with the number of moves ∀ still has.
    ``wins(n, k)`` is true when ∃ keeps every reachable network consistent
    for ``k`` more moves.  Challenges already answered by some reply leave the
    network unchanged, so with ``prune`` they are skipped; by monotonicity
    this never changes a verdict.
    """

    def __init__(self, s: FinStructure, budget: int | None = 5_000_000, prune: bool = True):
        tables_for(s)  # signature check
        self.s = s
        self.budget = budget
        self.prune = prune
        self.memo = {}
        self.visited = 0

    def _tick(self):
        self.visited += 1
        if self.budget is not None and self.visited > self.budget:
            raise Inconclusive(f"solver budget of {self.budget} positions exhausted")

    def wins(self, n: Network, k: int) -> bool:
        if not consistent(n, self.s):
            return False
        if k == 0:
            return True
        key = (canonical_key(n), k)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        self._tick()
        result = all(self.answer(n, ch, k) is not None
                     for ch in challenges(self.s, n, self.prune))
        self.memo[key] = result
        return result

    def answer(self, n: Network, ch: Challenge, k: int):
        """A reply to ``ch`` after which ∃ still wins with ``k - 1`` moves left, else None."""
        for r in responses(self.s, n, ch):
            if self.wins(apply(self.s, n, ch, r), k - 1):
                return r
        return None

    def init_answer(self, a: int, b: int, k: int):
        ch = Challenge("init", (a, b))
        for r in responses(self.s, None, ch):
            if self.wins(apply(self.s, None, ch, r), k):
                return r
        return None

    def choose(self, state: PlayState, ch: Challenge):
        if ch.kind == "init":
            return self.init_answer(*ch.args, state.moves_left)
        return self.answer(state.network, ch, state.moves_left)


def _losing_pairs(s: FinStructure, n: int, pairs, budget, first_only=True):
    solver = GameSolver(s, budget)
    bad = []
    for a, b in pairs:
        if solver.init_answer(a, b, n) is None:
            bad.append((a, b))
            if first_only:
                break
    return bad


def exists_wins(s: FinStructure, n: int, budget: int | None = 5_000_000, jobs: int = 1) -> bool:
    """Does ∃ win the ``n``-move game on ``s`` (after ∀'s opening pair)?

    Raises ``Inconclusive`` when the position budget runs out; with ``jobs``
    above one the opening pairs are split across processes, each with its own
    budget and memo.
    """
    if n < 0:
        raise ValueError("n must be a natural number")
    tables_for(s)
    pairs = [ch.args for ch in init_challenges(s)]
    if jobs <= 1 or len(pairs) < 2:
        return not _losing_pairs(s, n, pairs, budget)
    chunks = [pairs[i::jobs] for i in range(jobs)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(_losing_pairs, s, n, c, budget) for c in chunks if c]
        return not any(f.result() for f in futures)


def losing_pair(s: FinStructure, n: int, budget: int | None = 5_000_000):
    """An opening pair (by name) on which ∀ wins, or None."""
    bad = _losing_pairs(s, n, [ch.args for ch in init_challenges(s)], budget)
    return None if not bad else s.names(bad[0])
