"""Exact game-theoretic solver.

Negamax over {-1, 0, +1} with a transposition table, threat-forced move
pruning, dead-draw detection, and optional symmetry canonicalization
(translations, plus coordinate permutations) at shallow depths.  All values
are exact: there is no evaluation heuristic to be wrong.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from enum import Enum

from . import geometry
from .errors import InternalInconsistency, InvalidArgs, ResourceExhausted
from .game import GameState, Player, Status

CANON_DEPTH = 6  # canonical keys only while the board holds <= this many stones


class Outcome(str, Enum):
    P1_WIN = "P1Win"
    P2_WIN = "P2Win"
    DRAW = "Draw"


SYMMETRY_LEVELS = ("none", "translations", "full")


@dataclass(frozen=True)
class SolveLimits:
    budget_nodes: int | None = None
    budget_ms: float | None = None
    symmetry: str = "full"
    use_memo: bool = True

    def __post_init__(self):
        if self.symmetry not in SYMMETRY_LEVELS:
            raise InvalidArgs(f"symmetry must be one of {SYMMETRY_LEVELS}")


@dataclass
class SolveResult:
    m: int
    n: int
    q: int
    outcome: Outcome
    best_move: int | None
    nodes: int
    elapsed_ms: float

    def to_json(self):
        return {
            "m": self.m,
            "n": self.n,
            "q": self.q,
            "outcome": self.outcome.value,
            "nodes": self.nodes,
            "elapsed_ms": round(self.elapsed_ms, 3),
        }


@dataclass
class MonotonicityReport:
    n: int
    q: int
    outcomes: dict
    monotone: bool
    threshold: int | None  # least m in the range solving to P1Win


def point_transforms(index: geometry.IncidenceIndex, symmetry: str):
    """Point permutations generated by translations and, at the full level,
    coordinate permutations.  Each entry maps point index -> point index."""
    if symmetry == "none":
        return []
    codec, fieldt = index.codec, index.field
    size = index.n_points
    translations = [
        tuple(geometry.point_add(p, t, codec, fieldt) for p in range(size))
        for t in range(size)
    ]
    if symmetry == "translations":
        return translations
    digit_tables = []
    for perm in itertools.permutations(range(index.m)):
        tab = tuple(
            codec.encode(tuple(codec.decode(p)[perm[i]] for i in range(index.m)))
            for p in range(size)
        )
        digit_tables.append(tab)
    out = []
    for tr in translations:
        for pm in digit_tables:
            out.append(tuple(tr[pm[p]] for p in range(size)))
    return out


class _Search:
    """One solving session over a fixed incidence index."""

    def __init__(self, index: geometry.IncidenceIndex, limits: SolveLimits):
        self.index = index
        self.limits = limits
        self.size = index.n_points
        self.subsize = index.q**index.n
        self.through = tuple(tuple(int(i) for i in t) for t in index.through)
        self.sub_points = tuple(s.points for s in index.subspaces)
        k = len(index.subspaces)
        self.cnt = [None, [0] * k, [0] * k]
        self.free_cnt = [self.subsize] * k
        self.free_sum = [sum(pts) for pts in self.sub_points]
        self.close = [None, set(), set()]  # 1-close unblocked subspace ids
        self.nlive = [None, k, k]  # subspaces with no opposing stone
        self.weight = [None, [len(t) for t in self.through], [len(t) for t in self.through]]
        self.a = [0, 0, 0]
        self.n_free = self.size
        self.stones = 0
        self.nodes = 0
        self.tt = {}
        self.t0 = time.perf_counter()
        self.transforms = (
            point_transforms(index, limits.symmetry) if limits.use_memo else []
        )

    # -- incremental board ---------------------------------------------------

    def place(self, side, p):
        opp = 3 - side
        self.a[side] |= 1 << p
        self.n_free -= 1
        self.stones += 1
        cnt_s, cnt_o = self.cnt[side], self.cnt[opp]
        for sid in self.through[p]:
            c = cnt_s[sid]
            cnt_s[sid] = c + 1
            self.free_cnt[sid] -= 1
            self.free_sum[sid] -= p
            if c == 0:
                self.nlive[opp] -= 1
                self.close[opp].discard(sid)
                wo = self.weight[opp]
                for x in self.sub_points[sid]:
                    wo[x] -= 1
            if cnt_o[sid] == 0 and self.free_cnt[sid] == 1:
                self.close[side].add(sid)

    def unplace(self, side, p):
        opp = 3 - side
        self.a[side] &= ~(1 << p)
        self.n_free += 1
        self.stones -= 1
        cnt_s, cnt_o = self.cnt[side], self.cnt[opp]
        for sid in self.through[p]:
            cnt_s[sid] -= 1
            self.free_cnt[sid] += 1
            self.free_sum[sid] += p
            if cnt_s[sid] == 0:
                self.nlive[opp] += 1
                wo = self.weight[opp]
                for x in self.sub_points[sid]:
                    wo[x] += 1
                if cnt_o[sid] == self.subsize - 1:
                    self.close[opp].add(sid)
            if cnt_o[sid] == 0:
                if self.free_cnt[sid] == 1:
                    self.close[side].add(sid)
                elif self.free_cnt[sid] == 2:
                    self.close[side].discard(sid)

    # -- keys -----------------------------------------------------------------

    def key(self):
        a1, a2 = self.a[1], self.a[2]
        if self.transforms and self.stones <= CANON_DEPTH:
            size = self.size
            best = a1 << size | a2
            for tab in self.transforms:
                t1 = 0
                t = a1
                while t:
                    low = t & -t
                    t1 |= 1 << tab[low.bit_length() - 1]
                    t ^= low
                t2 = 0
                t = a2
                while t:
                    low = t & -t
                    t2 |= 1 << tab[low.bit_length() - 1]
                    t ^= low
                cand = t1 << size | t2
                if cand < best:
                    best = cand
            return best
        return a1 << self.size | a2

    # -- search ----------------------------------------------------------------

    def check_budget(self):
        lim = self.limits
        if lim.budget_nodes is not None and self.nodes > lim.budget_nodes:
            raise ResourceExhausted(
                f"node budget {lim.budget_nodes} exceeded", nodes=self.nodes
            )
        if lim.budget_ms is not None and self.nodes % 1024 == 0:
            elapsed = (time.perf_counter() - self.t0) * 1000
            if elapsed > lim.budget_ms:
                raise ResourceExhausted(
                    f"time budget {lim.budget_ms} ms exceeded",
                    nodes=self.nodes,
                    elapsed_ms=elapsed,
                )

    def search(self, side, alpha, beta):
        self.nodes += 1
        self.check_budget()

        if self.close[side]:
            return 1  # some subspace needs one more stone and has none of theirs
        opp = 3 - side
        forced = None
        if self.close[opp]:
            first = None
            for sid in self.close[opp]:
                mp = self.free_sum[sid]
                if first is None:
                    first = mp
                elif mp != first:
                    return -1  # two completion points, at most one can be blocked
            forced = first
        if not self.nlive[side] and not self.nlive[opp]:
            return 0  # every subspace blocked both ways: dead draw

        use_tt = self.limits.use_memo
        key = None
        if use_tt:
            key = (self.key(), side)
            entry = self.tt.get(key)
            if entry is not None:
                lo, hi = entry
                if lo == hi or lo >= beta:
                    return lo
                if hi <= alpha:
                    return hi
                if lo > alpha:
                    alpha = lo
                if hi < beta:
                    beta = hi

        upper = 1 if self.nlive[side] else 0
        lower = -1 if self.nlive[opp] else 0
        if upper <= alpha:
            return upper
        if lower >= beta:
            return lower
        alpha0 = alpha
        if lower > alpha:
            alpha = lower
        if upper < beta:
            beta = upper

        if forced is not None:
            moves = (forced,)
        else:
            occ = self.a[1] | self.a[2]
            w = self.weight[side]
            moves = sorted(
                (p for p in range(self.size) if not occ >> p & 1),
                key=lambda p: (-w[p], p),
            )

        best = -2
        for p in moves:
            self.place(side, p)
            if self.n_free == 0:
                v = 0  # no completion possible here, see close[] check above
            else:
                v = -self.search(opp, -beta, -alpha)
            self.unplace(side, p)
            if v > best:
                best = v
                if v > alpha:
                    alpha = v
                    if alpha >= beta:
                        break

        if use_tt:
            entry = self.tt.get(key, (-1, 1))
            if best <= alpha0:
                entry = (entry[0], min(entry[1], best))
            elif best >= beta:
                entry = (max(entry[0], best), entry[1])
            else:
                entry = (best, best)
            if entry[0] > entry[1]:
                raise InternalInconsistency("transposition bounds crossed")
            self.tt[key] = entry
        return best

    def solve_value(self, side):
        if self.close[side]:
            return 1
        return self.search(side, -1, 1)

    @property
    def elapsed_ms(self):
        return (time.perf_counter() - self.t0) * 1000


def _load(search: _Search, state: GameState):
    order = sorted(
        [p for p in range(state.spec.size) if state.a1 >> p & 1]
    ) + sorted([p for p in range(state.spec.size) if state.a2 >> p & 1])
    n1 = bin(state.a1).count("1")
    for i, p in enumerate(order):
        search.place(1 if i < n1 else 2, p)


def _outcome(value, side_to_move):
    if value == 0:
        return Outcome.DRAW
    winner = side_to_move if value > 0 else 3 - side_to_move
    return Outcome.P1_WIN if winner == 1 else Outcome.P2_WIN


def solve(m: int, n: int, q: int, limits: SolveLimits | None = None,
          index: geometry.IncidenceIndex | None = None) -> SolveResult:
    """Solve the game from the empty board."""
    limits = limits or SolveLimits()
    index = index or geometry.enumerate_subspaces(m, n, q)
    search = _Search(index, limits)
    value = search.solve_value(1)
    outcome = _outcome(value, 1)
    if outcome is Outcome.P2_WIN:
        # the second player could steal any winning strategy, so this is a bug
        raise InternalInconsistency(f"({m},{n})_{q} solved to P2Win from the empty board")
    best = _lowest_optimal_move(search, 1, value)
    return SolveResult(m, n, q, outcome, best, search.nodes, search.elapsed_ms)


def solve_state(state: GameState, limits: SolveLimits | None = None) -> SolveResult:
    """Exact outcome from an arbitrary position (terminal ones included)."""
    spec = state.spec
    limits = limits or SolveLimits()
    if state.status is not Status.ONGOING:
        outcome = {
            Status.P1_WON: Outcome.P1_WIN,
            Status.P2_WON: Outcome.P2_WIN,
            Status.DRAW: Outcome.DRAW,
        }[state.status]
        return SolveResult(spec.m, spec.n, spec.q, outcome, None, 0, 0.0)
    search = _Search(spec.index, limits)
    _load(search, state)
    side = 1 if state.to_move is Player.P1 else 2
    value = search.solve_value(side)
    best = _lowest_optimal_move(search, side, value)
    return SolveResult(spec.m, spec.n, spec.q, _outcome(value, side), best,
                       search.nodes, search.elapsed_ms)


def _completion_points(search: _Search, side):
    return {search.free_sum[sid] for sid in search.close[side]}


def _lowest_optimal_move(search: _Search, side, value):
    """Lowest point index whose move keeps the proven value."""
    if search.n_free == 0:
        return None
    wins = _completion_points(search, side)
    opp = 3 - side
    occ = search.a[1] | search.a[2]
    for p in range(search.size):
        if occ >> p & 1:
            continue
        if p in wins:
            cand = 1
        else:
            search.place(side, p)
            cand = 0 if search.n_free == 0 else -search.search(opp, -1, 1)
            search.unplace(side, p)
        if cand == value:
            return p
    raise InternalInconsistency("no move achieves the proven value")


def best_line(m: int, n: int, q: int, limits: SolveLimits | None = None,
              index: geometry.IncidenceIndex | None = None):
    """A principal variation: lowest-index optimal move at every step."""
    limits = limits or SolveLimits()
    index = index or geometry.enumerate_subspaces(m, n, q)
    search = _Search(index, limits)
    side = 1
    line = []
    value = search.solve_value(side)
    while search.n_free > 0:
        move = _lowest_optimal_move(search, side, value)
        line.append(move)
        if move in _completion_points(search, side):
            break  # the move finishes the game
        search.place(side, move)
        side = 3 - side
        value = -value
    return line


def verify_monotonicity(n: int, q: int, m_range, limits: SolveLimits | None = None) -> MonotonicityReport:
    """Solve a range of m and check the draw -> first-player-win shape."""
    outcomes = {}
    shared_limits = limits or SolveLimits()
    for m in m_range:
        if m < n:
            raise InvalidArgs(f"m={m} below n={n}")
        outcomes[m] = solve(m, n, q, shared_limits).outcome
    ms = sorted(outcomes)
    seen_win = False
    monotone = True
    threshold = None
    for m in ms:
        if outcomes[m] is Outcome.P1_WIN:
            if threshold is None:
                threshold = m
            seen_win = True
        elif seen_win:
            monotone = False
    return MonotonicityReport(n, q, outcomes, monotone, threshold)
