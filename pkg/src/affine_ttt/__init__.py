"""Strong positional tic-tac-toe on finite affine boards.

The board is the vector space F_q^m and the winning sets are its affine
n-dimensional subspaces.  Submodules:

    geometry    field tables, point coding, subspace enumeration
    game        rules, state, threats, transcripts
    solver      exact negamax certification with symmetry reduction
    strategies  engines (random, threat-greedy, perfect, potential breaker,
                pairing) and verification harnesses
    extremal    quadruple counting, subspace-free sets, blocking sets
    bounds      threshold bound calculators and assembled reports
    cli         command-line front door
    server      HTTP play service
"""

from . import bounds, errors, extremal, game, geometry, solver, strategies
from .bounds import ThresholdReport, threshold_report
from .game import GameState, Player, Status, apply_move, new_game
from .solver import Outcome, SolveLimits, solve
from .strategies import StrategySpec, make_strategy, run_match

__version__ = "0.1.0"

__all__ = [
    "bounds", "errors", "extremal", "game", "geometry", "solver", "strategies",
    "ThresholdReport", "threshold_report",
    "GameState", "Player", "Status", "apply_move", "new_game",
    "Outcome", "SolveLimits", "solve",
    "StrategySpec", "make_strategy", "run_match",
    "__version__",
]
