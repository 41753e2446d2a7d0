"""Strong-game engine on affine boards.

Both players claim free points; the first to fully occupy some affine
n-subspace wins, and a full board with no completed subspace is a draw.
States are plain records; apply_move returns a fresh state and never
mutates its input.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import geometry
from .errors import IllegalMove, InvalidArgs


class Player(str, Enum):
    P1 = "P1"
    P2 = "P2"

    @property
    def opponent(self):
        return Player.P2 if self is Player.P1 else Player.P1


class Status(str, Enum):
    ONGOING = "Ongoing"
    P1_WON = "P1Won"
    P2_WON = "P2Won"
    DRAW = "Draw"


WIN_STATUS = {Player.P1: Status.P1_WON, Player.P2: Status.P2_WON}


@dataclass(frozen=True)
class GameSpec:
    m: int
    n: int
    q: int
    index: geometry.IncidenceIndex

    @property
    def size(self):
        return self.q**self.m

    @property
    def subspace_size(self):
        return self.q**self.n


@dataclass(eq=False)
class GameState:
    spec: GameSpec
    a1: int  # P1 point bitset
    a2: int  # P2 point bitset
    to_move: Player
    count1: np.ndarray  # P1 stones per subspace
    count2: np.ndarray
    status: Status
    winning_id: int | None
    move_log: tuple


@dataclass(frozen=True)
class Threat:
    subspace_id: int
    player: Player
    s: int
    missing: tuple  # the s free points completing the subspace


@dataclass(frozen=True)
class ForkWitness:
    subspace_ids: tuple
    missing: tuple  # distinct completion points, one per subspace


def new_game(m: int, n: int, q: int, *, limit: int = geometry.DEFAULT_BOARD_LIMIT) -> GameState:
    index = geometry.enumerate_subspaces(m, n, q, limit=limit)
    return game_from_index(index)


def game_from_index(index: geometry.IncidenceIndex) -> GameState:
    spec = GameSpec(index.m, index.n, index.q, index)
    k = len(index)
    return GameState(
        spec=spec,
        a1=0,
        a2=0,
        to_move=Player.P1,
        count1=np.zeros(k, dtype=np.int16),
        count2=np.zeros(k, dtype=np.int16),
        status=Status.ONGOING,
        winning_id=None,
        move_log=(),
    )


def legal_moves(state: GameState):
    if state.status is not Status.ONGOING:
        return []
    occ = state.a1 | state.a2
    return [p for p in range(state.spec.size) if not occ >> p & 1]


def apply_move(state: GameState, point: int) -> GameState:
    if state.status is not Status.ONGOING:
        raise IllegalMove(f"game already finished with status {state.status.value}")
    if not isinstance(point, int) or not 0 <= point < state.spec.size:
        raise IllegalMove(f"point {point!r} outside board of size {state.spec.size}")
    if (state.a1 | state.a2) >> point & 1:
        raise IllegalMove(f"point {point} is occupied")

    mover = state.to_move
    touched = state.spec.index.through[point]
    if mover is Player.P1:
        a1, a2 = state.a1 | 1 << point, state.a2
        count1 = state.count1.copy()
        count1[touched] += 1
        count2 = state.count2
        own = count1
    else:
        a1, a2 = state.a1, state.a2 | 1 << point
        count2 = state.count2.copy()
        count2[touched] += 1
        count1 = state.count1
        own = count2

    full = state.spec.subspace_size
    status = Status.ONGOING
    winning_id = None
    done = touched[own[touched] == full]
    if done.size:
        status = WIN_STATUS[mover]
        winning_id = int(done.min())
    elif (a1 | a2) == (1 << state.spec.size) - 1:
        status = Status.DRAW

    return GameState(
        spec=state.spec,
        a1=a1,
        a2=a2,
        to_move=mover.opponent,
        count1=count1,
        count2=count2,
        status=status,
        winning_id=winning_id,
        move_log=state.move_log + ((mover, point),),
    )


def threats(state: GameState, player: Player, s: int = 1):
    """Subspaces where `player` is s points from completion and the
    opponent holds none of the points, ascending subspace id."""
    spec = state.spec
    if not 1 <= s <= spec.subspace_size:
        raise InvalidArgs(f"closeness {s} not in [1, {spec.subspace_size}]")
    own_count, opp_count = (
        (state.count1, state.count2) if player is Player.P1 else (state.count2, state.count1)
    )
    own_mask = state.a1 if player is Player.P1 else state.a2
    ids = np.nonzero((own_count == spec.subspace_size - s) & (opp_count == 0))[0]
    out = []
    for sid in ids:
        sub = spec.index.subspaces[int(sid)]
        missing = tuple(p for p in sub.points if not own_mask >> p & 1)
        out.append(Threat(int(sid), player, s, missing))
    return out


def fork_witness(state: GameState):
    """After a move: two 1-close unblocked subspaces of the mover with
    distinct completion points, lowest id pair, or None."""
    if not state.move_log:
        return None
    player = state.move_log[-1][0]
    ones = threats(state, player, 1)
    for i in range(len(ones)):
        for j in range(i + 1, len(ones)):
            if ones[i].missing[0] != ones[j].missing[0]:
                return ForkWitness(
                    (ones[i].subspace_id, ones[j].subspace_id),
                    (ones[i].missing[0], ones[j].missing[0]),
                )
    return None


# ---------------------------------------------------------------------------
# transcripts

_RESULT_TOKEN = {Status.P1_WON: "P1WIN", Status.P2_WON: "P2WIN", Status.DRAW: "DRAW"}


def format_transcript(state: GameState) -> str:
    spec = state.spec
    lines = [f"{spec.q} {spec.m} {spec.n}"]
    for player, point in state.move_log:
        lines.append(f"{player.value} {point}")
    if state.status is not Status.ONGOING:
        lines.append(f"RESULT {_RESULT_TOKEN[state.status]}")
    return "\n".join(lines) + "\n"


def replay_transcript(text: str, *, limit: int = geometry.DEFAULT_BOARD_LIMIT) -> GameState:
    """Parse and replay; raises InvalidArgs on malformed or inconsistent input."""
    lines = [ln for ln in text.strip("\n").split("\n") if ln.strip()]
    if not lines:
        raise InvalidArgs("empty transcript")
    head = lines[0].split()
    if len(head) != 3:
        raise InvalidArgs(f"malformed transcript header: {lines[0]!r}")
    q, m, n = (int(t) for t in head)
    state = new_game(m, n, q, limit=limit)
    claimed = None
    for ln in lines[1:]:
        parts = ln.split()
        if parts[0] == "RESULT":
            if len(parts) != 2 or claimed is not None:
                raise InvalidArgs(f"malformed result line: {ln!r}")
            claimed = parts[1]
            continue
        if claimed is not None:
            raise InvalidArgs("moves after RESULT line")
        if len(parts) != 2 or parts[0] not in ("P1", "P2"):
            raise InvalidArgs(f"malformed move line: {ln!r}")
        if parts[0] != state.to_move.value:
            raise InvalidArgs(f"move out of turn: {ln!r}")
        state = apply_move(state, int(parts[1]))
    if claimed is not None:
        if state.status is Status.ONGOING:
            raise InvalidArgs("RESULT line on an unfinished game")
        if _RESULT_TOKEN[state.status] != claimed:
            raise InvalidArgs(
                f"transcript claims {claimed}, engine reached {_RESULT_TOKEN[state.status]}"
            )
    return state


# ---------------------------------------------------------------------------
# mutable position: shared in-place board for search and bulk playouts

class MutablePosition:
    """Bitset board with per-subspace counters and O(deg) place/unplace.

    Used by the solver and the strategy playout loops; the public GameState
    stays immutable.  Player side is 1 or 2 here to keep the hot path plain.
    """

    __slots__ = ("index", "size", "full", "through", "subsize", "a", "counts", "n_free")

    def __init__(self, index: geometry.IncidenceIndex):
        self.index = index
        self.size = index.n_points
        self.full = (1 << self.size) - 1
        self.through = tuple(tuple(int(i) for i in t) for t in index.through)
        self.subsize = index.q**index.n
        self.a = [0, 0, 0]  # 1-indexed by side
        self.counts = [None, [0] * len(index), [0] * len(index)]
        self.n_free = self.size

    def place(self, side: int, point: int) -> bool:
        """Claim a free point; returns True when it completes a subspace."""
        self.a[side] |= 1 << point
        self.n_free -= 1
        counts = self.counts[side]
        won = False
        target = self.subsize
        for sid in self.through[point]:
            counts[sid] += 1
            if counts[sid] == target:
                won = True
        return won

    def unplace(self, side: int, point: int):
        self.a[side] &= ~(1 << point)
        self.n_free += 1
        counts = self.counts[side]
        for sid in self.through[point]:
            counts[sid] -= 1

    def free_points(self):
        occ = self.a[1] | self.a[2]
        return [p for p in range(self.size) if not occ >> p & 1]

    def completed(self, side: int):
        """Lowest completed subspace id for the side, or None."""
        counts = self.counts[side]
        target = self.subsize
        for sid in range(len(counts)):
            if counts[sid] == target:
                return sid
        return None
