"""Players for the game and seeded playouts."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from relrep.algebra import FinStructure
from relrep.game.moves import (Challenge, PlayState, Response, apply, challenges, init_challenges,
                               respond, responses)
from relrep.game.network import Network, consistent
from relrep.game.solver import GameSolver


class Resign(Exception):
    """Raised by a player with no acceptable move."""


class ExistsStrategy:
    """Chooses ∃'s response; ``reset`` is called once per game."""

    name = "exists"

    def reset(self, s: FinStructure, n: int):
        pass

    def respond(self, state: PlayState, ch: Challenge) -> Response:
        raise NotImplementedError


class ForallStrategy:
    name = "forall"

    def reset(self, s: FinStructure, n: int):
        pass

    def challenge(self, state: PlayState) -> Challenge | None:
        """The next challenge, or None to pass."""
        raise NotImplementedError


class FirstConsistent(ExistsStrategy):
    """First conservative reply that keeps the network consistent."""

    name = "first-consistent"

    def respond(self, state, ch):
        s = state.structure
        for r in responses(s, state.network, ch):
            if consistent(apply(s, state.network, ch, r), s):
                return r
        raise Resign(f"no consistent reply to {ch.describe(s)}")


class SolverStrategy(ExistsStrategy):
    """Plays a reply the exact solver certifies as winning, if any."""

    name = "solver"

    def __init__(self, budget: int | None = 5_000_000):
        self.budget = budget
        self.solver = None

    def reset(self, s, n):
        if self.solver is None or self.solver.s is not s:
            self.solver = GameSolver(s, self.budget)

    def respond(self, state, ch):
        self.reset(state.structure, state.moves_left)
        r = self.solver.choose(state, ch)
        if r is None:
            return FirstConsistent().respond(state, ch)
        return r


class RandomForall(ForallStrategy):
    """Uniform over opening pairs, then uniform over legal challenges."""

    name = "random"

    def __init__(self, seed: int = 0):
        self.rng = random.Random(seed)

    def challenge(self, state):
        s = state.structure
        if state.network is None:
            opts = init_challenges(s)
        else:
            opts = challenges(s, state.network)
        return self.rng.choice(opts) if opts else None


class SolverForall(ForallStrategy):
    """Picks a challenge ∃ cannot survive when one exists, else the first one."""

    name = "solver"

    def __init__(self, budget: int | None = 5_000_000):
        self.budget = budget
        self.solver = None

    def challenge(self, state):
        s = state.structure
        if self.solver is None or self.solver.s is not s:
            self.solver = GameSolver(s, self.budget)
        if state.network is None:
            opts = init_challenges(s)
            for ch in opts:
                if self.solver.init_answer(*ch.args, state.moves_left) is None:
                    return ch
            return opts[0] if opts else None
        opts = challenges(s, state.network)
        for ch in opts:
            if self.solver.answer(state.network, ch, state.moves_left) is None:
                return ch
        return opts[0] if opts else None


@dataclass
class Playout:
    survived: bool
    moves: list = field(default_factory=list)  # (Challenge, Response) pairs
    network: Network | None = None
    reason: str = ""


def playout(s: FinStructure, n: int, exists: ExistsStrategy, forall: ForallStrategy) -> Playout:
    """One game: ∀'s opening pair, then ``n`` challenges."""
    exists.reset(s, n)
    forall.reset(s, n)
    state = PlayState(s, None, n)
    out = Playout(True)
    while state.network is None or state.moves_left > 0:
        ch = forall.challenge(state)
        if ch is None:
            out.reason = "∀ passes"
            break
        try:
            r = exists.respond(state, ch)
        except Resign as exc:
            out.survived = False
            out.reason = str(exc)
            break
        state = respond(state, ch, r)
        out.moves.append((ch, r))
        if not consistent(state.network, s):
            out.survived = False
            out.reason = f"inconsistent after {ch.describe(s)}"
            break
    out.network = state.network
    return out


def survival_rate(s: FinStructure, n: int, exists: ExistsStrategy, games: int, seed: int = 0):
    """(survived, played, first losing Playout or None) over seeded random ∀ games."""
    forall = RandomForall(seed)
    won = 0
    first_loss = None
    for _ in range(games):
        p = playout(s, n, exists, forall)
        if p.survived:
            won += 1
        elif first_loss is None:
            first_loss = p
    return won, games, first_loss


def refute(s: FinStructure, n: int, exists: ExistsStrategy, prune: bool = True):
    """A ∀ schedule of at most ``n`` challenges beating ``exists``, or None.

    Searches every opening pair and challenge; ``exists`` must not depend on
    history beyond the network.  With ``prune``, challenges some reply
    answers for free are skipped, which can only hide losses of a strategy
    that does not take the free reply.
    """
    exists.reset(s, n)
    seen = set()

    def search(state):
        if not consistent(state.network, s):
            return []
        if state.moves_left == 0:
            return None
        key = (state.network, state.moves_left)
        if key in seen:
            return None
        for ch in challenges(s, state.network, prune):
            try:
                r = exists.respond(state, ch)
            except Resign:
                return [(ch, None)]
            line = search(respond(state, ch, r))
            if line is not None:
                return [(ch, r)] + line
        seen.add(key)
        return None

    for ch in init_challenges(s):
        state = PlayState(s, None, n)
        try:
            r = exists.respond(state, ch)
        except Resign:
            return [(ch, None)]
        line = search(respond(state, ch, r))
        if line is not None:
            return [(ch, r)] + line
    return None
