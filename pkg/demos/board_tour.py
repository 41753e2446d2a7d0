"""
A first walk around an affine board
===================================

The 3x3 tic-tac-toe everyone knows is the q=3, m=2 case with lines
(1-dimensional affine subspaces) as winning sets, except that the classical
game only uses 8 of the 12 lines.  Here all 12 count.
"""

from affine_ttt.geometry import enumerate_subspaces, gaussian_binomial
from affine_ttt.game import apply_move, game_from_index
from affine_ttt.strategies import StrategySpec, run_match
from affine_ttt.cli import render_board

# Every affine line in F_3^2: 3 points each, 12 of them.
index = enumerate_subspaces(2, 1, 3)
print("lines on the 3x3 board:", len(index.subspaces))
print("count check: 3^(2-1) * [2 choose 1]_3 =", 3 * gaussian_binomial(2, 1, 3))

# The four lines through the center cell (point 4), as point triples.
through_center = [index.subspaces[sid].points for sid in index.through[4]]
print("lines through the center:", through_center)

# Play out a few forced moves by hand.  Points are integers; on this board
# point p sits at column p % 3, row p // 3.
state = game_from_index(index)
for p in (4, 0, 2):  # center, corner, corner
    state = apply_move(state, p)
print()
print(render_board(state))
print("to move:", state.to_move, "| status:", state.status)

# P1's stones 4 and 2 sit on the diagonal {2, 4, 6}, one move from done, so
# P2 has to answer at 6.  Let an engine finish both sides instead.
final = run_match(index, StrategySpec("ThreatGreedy"), StrategySpec("ThreatGreedy"), seed=7)
print()
print("greedy self-play from scratch ends:", final.status)
print(render_board(final))

# The full game is a first-player win, and the solver will say so from the
# empty board in a few hundred nodes.
from affine_ttt.solver import solve

result = solve(2, 1, 3)
print("solved value:", result.outcome, "| best opening:", result.best_move,
      "| nodes:", result.nodes)
