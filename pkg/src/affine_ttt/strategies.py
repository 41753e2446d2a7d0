"""Playable strategies and strategy verification harnesses.

Hosts the potential-function breaker, the two pairing defenses for m = n+1,
simple baselines (random, threat-greedy, perfect), seeded match running, and
an exhaustive verifier that walks every first-player move sequence against a
deterministic defender.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import geometry, solver
from .errors import (
    InvalidArgs,
    NoLegalMove,
    WrongCharacteristic,
)
from .game import (
    GameState,
    MutablePosition,
    Player,
    Status,
    apply_move,
    game_from_index,
    legal_moves,
    threats,
)

KINDS = ("Random", "ThreatGreedy", "Perfect", "ESBreaker", "PairingEven", "PairingOdd")


@dataclass(frozen=True)
class StrategySpec:
    kind: str
    seed: int = 0
    v: int | None = None  # pairing translation vector (point index), even q only
    limits: solver.SolveLimits | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidArgs(f"unknown strategy kind {self.kind!r}")


@dataclass
class PotentialLedger:
    maker: Player
    terms: dict  # subspace id -> Fraction, only subspaces untouched by breaker
    total: Fraction


_MATRIX_CACHE = {}


def incidence_matrix(index: geometry.IncidenceIndex) -> np.ndarray:
    """Dense point-by-subspace 0/1 matrix, cached per (m, n, q)."""
    key = (index.m, index.n, index.q)
    mat = _MATRIX_CACHE.get(key)
    if mat is None:
        mat = np.zeros((index.n_points, len(index)), dtype=np.int64)
        for p in range(index.n_points):
            mat[p, index.through[p]] = 1
        _MATRIX_CACHE[key] = mat
    return mat


# ---------------------------------------------------------------------------
# potential-function breaker

def es_potential(state: GameState, maker: Player) -> PotentialLedger:
    """Sum of 2^-(missing maker points) over subspaces with no breaker stone.

    Exact dyadic arithmetic; a completed maker subspace contributes 2^0 = 1.
    """
    spec = state.spec
    own, opp = (
        (state.count1, state.count2) if maker is Player.P1 else (state.count2, state.count1)
    )
    terms = {}
    total = Fraction(0)
    full = spec.subspace_size
    for sid in np.nonzero(opp == 0)[0]:
        t = Fraction(1, 2 ** (full - int(own[sid])))
        terms[int(sid)] = t
        total += t
    return PotentialLedger(maker, terms, total)


def _scaled_potential(cnt_maker, cnt_breaker):
    """Potential times 2^(q^n) as an exact integer, for cheap comparisons."""
    live = cnt_breaker == 0
    return int((np.where(live, np.int64(1) << cnt_maker.astype(np.int64), 0)).sum())


def es_breaker_move(state: GameState, maker: Player) -> int:
    """Point with the largest incident live potential mass, lowest index first."""
    spec = state.spec
    own, opp = (
        (state.count1, state.count2) if maker is Player.P1 else (state.count2, state.count1)
    )
    occ = state.a1 | state.a2
    if occ == (1 << spec.size) - 1:
        raise NoLegalMove("board is full")
    live_term = np.where(opp == 0, np.int64(1) << own.astype(np.int64), 0)
    w = incidence_matrix(spec.index) @ live_term
    for p in range(spec.size):
        if occ >> p & 1:
            w[p] = -1
    return int(np.argmax(w))  # first occurrence wins ties


# ---------------------------------------------------------------------------
# strategies

class RandomStrategy:
    def __init__(self, seed):
        self.rng = random.Random(seed)

    def move(self, state: GameState) -> int:
        free = legal_moves(state)
        if not free:
            raise NoLegalMove("no legal move")
        return self.rng.choice(free)


class ThreatGreedyStrategy:
    """Win now, else block now, else grab the point on the most live lines."""

    def move(self, state: GameState) -> int:
        me = state.to_move
        mine = threats(state, me, 1)
        if mine:
            return mine[0].missing[0]
        theirs = threats(state, me.opponent, 1)
        if theirs:
            return theirs[0].missing[0]
        own_opp = state.count2 if me is Player.P1 else state.count1
        live = (own_opp == 0).astype(np.int64)
        w = incidence_matrix(state.spec.index) @ live
        occ = state.a1 | state.a2
        best, best_w = None, -1
        for p in range(state.spec.size):
            if occ >> p & 1:
                continue
            if w[p] > best_w:
                best, best_w = p, int(w[p])
        if best is None:
            raise NoLegalMove("no legal move")
        return best


class PerfectStrategy:
    def __init__(self, limits=None):
        self.limits = limits or solver.SolveLimits()

    def move(self, state: GameState) -> int:
        res = solver.solve_state(state, self.limits)
        if res.best_move is None:
            raise NoLegalMove("no legal move")
        return res.best_move


class ESBreakerStrategy:
    def __init__(self, side: Player):
        self.side = side

    def move(self, state: GameState) -> int:
        return es_breaker_move(state, self.side.opponent)


class PairingStrategy:
    """Defense for m = n+1 boards: block a one-point threat if one exists,
    otherwise answer the opponent's last move x with its partner (x+v for
    even q, -x for odd q), otherwise take the lowest free point."""

    def __init__(self, index: geometry.IncidenceIndex, side: Player, *, even: bool, v=None):
        q = index.q
        if even and q % 2:
            raise WrongCharacteristic(f"even-q pairing needs even q, got {q}")
        if not even and q % 2 == 0:
            raise WrongCharacteristic(f"odd-q pairing needs odd q, got {q}")
        codec, fieldt = index.codec, index.field
        size = index.n_points
        self.side = side
        self.even = even
        if even:
            if v is None:
                v = q ** (index.m - 1)  # last standard basis vector
            if not 0 < v < size:
                raise InvalidArgs(f"pairing vector {v} must be a nonzero point index")
            self.partner = tuple(
                geometry.point_add(p, v, codec, fieldt) for p in range(size)
            )
            self.v = v
        else:
            self.partner = tuple(
                geometry.point_neg(p, codec, fieldt) for p in range(size)
            )
            self.v = None
        self.index = index

    def move(self, state: GameState) -> int:
        occ = state.a1 | state.a2
        if occ == (1 << state.spec.size) - 1:
            raise NoLegalMove("board is full")
        opp = self.side.opponent
        ones = threats(state, opp, 1)
        if ones:
            return ones[0].missing[0]  # lowest subspace id
        if state.move_log and state.move_log[-1][0] is opp:
            x = state.move_log[-1][1]
            # the odd-q rule pairs nonzero points only; x = 0 falls through
            if self.even or x != 0:
                y = self.partner[x]
                if not occ >> y & 1:
                    return y
        for p in range(state.spec.size):
            if not occ >> p & 1:
                return p
        raise NoLegalMove("no legal move")

    # position-level twin of move(), used by the exhaustive verifier
    def move_fast(self, pos: MutablePosition, last_opp_move: int) -> int:
        target = pos.subsize
        cnt_opp = pos.counts[1 if self.side is Player.P2 else 2]
        cnt_own = pos.counts[2 if self.side is Player.P2 else 1]
        for sid in range(len(cnt_opp)):
            if cnt_opp[sid] == target - 1 and cnt_own[sid] == 0:
                occ = pos.a[1] | pos.a[2]
                for p in pos.index.subspaces[sid].points:
                    if not occ >> p & 1:
                        return p
        occ = pos.a[1] | pos.a[2]
        if self.even or last_opp_move != 0:
            y = self.partner[last_opp_move]
            if not occ >> y & 1:
                return y
        for p in range(pos.size):
            if not occ >> p & 1:
                return p
        raise NoLegalMove("no legal move")


def make_strategy(sspec: StrategySpec, index: geometry.IncidenceIndex, side: Player):
    if sspec.kind == "Random":
        return RandomStrategy(sspec.seed)
    if sspec.kind == "ThreatGreedy":
        return ThreatGreedyStrategy()
    if sspec.kind == "Perfect":
        return PerfectStrategy(sspec.limits)
    if sspec.kind == "ESBreaker":
        return ESBreakerStrategy(side)
    if sspec.kind == "PairingEven":
        return PairingStrategy(index, side, even=True, v=sspec.v)
    if sspec.kind == "PairingOdd":
        return PairingStrategy(index, side, even=False)
    raise InvalidArgs(f"unknown strategy kind {sspec.kind!r}")


def run_match(index: geometry.IncidenceIndex, spec1: StrategySpec, spec2: StrategySpec,
              seed: int | None = None) -> GameState:
    """Play one full game.  A match seed S reseeds the sides as 2S and 2S+1;
    without it each side uses its own spec seed."""
    if seed is not None:
        spec1 = StrategySpec(spec1.kind, 2 * seed, spec1.v, spec1.limits)
        spec2 = StrategySpec(spec2.kind, 2 * seed + 1, spec2.v, spec2.limits)
    s1 = make_strategy(spec1, index, Player.P1)
    s2 = make_strategy(spec2, index, Player.P2)
    st = game_from_index(index)
    while st.status is Status.ONGOING:
        mover = s1 if st.to_move is Player.P1 else s2
        st = apply_move(st, mover.move(st))
    return st


# ---------------------------------------------------------------------------
# maker-breaker playout harness

@dataclass
class ESReport:
    playouts: int
    completions: int  # maker-completed subspaces (should stay 0 under the bound)
    potential_monotone: bool  # potential at breaker-to-move instants never rose


def es_playouts(index: geometry.IncidenceIndex, playouts: int, seed: int) -> ESReport:
    """Random maker vs potential breaker, maker moving first.

    Judged in maker-breaker terms: breaker completions do not end the game.
    The exact potential is sampled at each of the breaker's turns, i.e. right
    after every maker move; the blocking argument lives at those instants,
    where the breaker's removal (a maximum over free points taken while the
    maker's next point is still free) dominates the maker's following gain.
    Sampling after the breaker's replies instead admits genuine upticks: the
    maker's gain is spread over all live subspaces through its point, and two
    points share few subspaces, so no single reply can always recapture it.
    """
    size = index.n_points
    k = len(index)
    full = index.q**index.n
    mat = incidence_matrix(index)
    through = index.through
    completions = 0
    monotone = True
    for trial in range(playouts):
        rng = random.Random(seed + trial)
        cnt1 = np.zeros(k, dtype=np.int16)
        cnt2 = np.zeros(k, dtype=np.int16)
        free = list(range(size))
        occupied = np.zeros(size, dtype=bool)
        last_potential = None
        maker_turn = True
        done = False
        while free and not done:
            if maker_turn:
                x = free.pop(rng.randrange(len(free)))
                occupied[x] = True
                cnt1[through[x]] += 1
                if (cnt1[through[x]] == full).any():
                    completions += 1
                    done = True
                elif free:
                    pot = _scaled_potential(cnt1, cnt2)
                    if last_potential is not None and pot > last_potential:
                        monotone = False
                    last_potential = pot
            else:
                live_term = np.where(cnt2 == 0, np.int64(1) << cnt1.astype(np.int64), 0)
                w = mat @ live_term
                w[occupied] = -1
                x = int(np.argmax(w))
                free.remove(x)
                occupied[x] = True
                cnt2[through[x]] += 1
            maker_turn = not maker_turn
    return ESReport(playouts, completions, monotone)


# ---------------------------------------------------------------------------
# exhaustive verification of deterministic defenses

@dataclass
class ExhaustReport:
    verified: bool
    states: int  # distinct first-player-to-move positions walked
    leaves: int
    counterexample: str | None  # transcript of a first-player win, if found


def exhaust_verify(index: geometry.IncidenceIndex, defender, *, memo: bool = True) -> ExhaustReport:
    """Walk every P1 move sequence with P2 played by `defender`.

    `defender` is a PairingStrategy or any callable (pos, last_p1_move) ->
    point that depends only on the position and that move; determinism is
    what makes the transposition memo sound.  Verified means no leaf of the
    full tree is a P1 win.
    """
    if isinstance(defender, PairingStrategy):
        reply = defender.move_fast
    elif callable(defender):
        reply = defender
    else:
        raise InvalidArgs("defender must be a PairingStrategy or a callable")

    pos = MutablePosition(index)
    seen = set()
    stats = {"states": 0, "leaves": 0}
    moves = []

    def transcript():
        lines = [f"{index.q} {index.m} {index.n}"]
        for side, p in moves:
            lines.append(f"P{side} {p}")
        lines.append("RESULT P1WIN")
        return "\n".join(lines) + "\n"

    def walk():
        if memo:
            key = (pos.a[1], pos.a[2])
            if key in seen:
                return None
            seen.add(key)
        stats["states"] += 1
        occ = pos.a[1] | pos.a[2]
        for p in range(pos.size):
            if occ >> p & 1:
                continue
            won = pos.place(1, p)
            moves.append((1, p))
            try:
                if won:
                    stats["leaves"] += 1
                    return transcript()
                if pos.n_free == 0:
                    stats["leaves"] += 1
                    continue
                r = reply(pos, p)
                won2 = pos.place(2, r)
                moves.append((2, r))
                try:
                    if won2 or pos.n_free == 0:
                        stats["leaves"] += 1
                        continue
                    bad = walk()
                    if bad:
                        return bad
                finally:
                    if moves and moves[-1] == (2, r):
                        pos.unplace(2, r)
                        moves.pop()
            finally:
                if moves and moves[-1] == (1, p):
                    pos.unplace(1, p)
                    moves.pop()
        return None

    bad = walk()
    return ExhaustReport(bad is None, stats["states"], stats["leaves"], bad)
