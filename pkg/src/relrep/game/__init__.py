"""The representation game: networks, moves, an exact solver and strategies."""

from relrep.game.moves import Challenge, PlayState, Response, legal_challenges, respond
from relrep.game.network import (FRESH, Network, add_bot, add_top, consistent, extends,
                                 init_networks, net_nref, net_ref)
from relrep.game.solver import GameSolver, exists_wins

__all__ = ["FRESH", "Challenge", "GameSolver", "Network", "PlayState", "Response", "add_bot",
           "add_top", "consistent", "exists_wins", "extends", "init_networks",
           "legal_challenges", "net_nref", "net_ref", "respond"]
