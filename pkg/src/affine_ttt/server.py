"""HTTP play service: sessions over the game engine and strategy suite.

JSON over HTTP, consumed by the web client but usable from anything that
speaks it:

    POST /api/session                {m, n, q, engine, human_side, seed}
    GET  /api/session/{id}
    POST /api/session/{id}/move     {point: int}
    GET  /api/session/{id}/hint
    GET  /api/specs

Sessions live in memory behind an LRU with a TTL; every state transition
goes through the same apply_move the rest of the package uses, so the
server cannot drift from the engine's rules.  Endpoints are written as
plain functions (the framework runs them on a thread pool) and a lock per
session serializes mutations; the geometry tables behind the sessions are
shared read-only.
"""

from __future__ import annotations

import threading
import time
import uuid
from collections import OrderedDict
from pathlib import Path
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import game, geometry, solver, strategies
from .errors import AffineTTTError, IllegalMove
from .game import Player, Status

MAX_SESSIONS = 1024
TTL_SECONDS = 24 * 3600
HINT_EXACT_LIMIT = 9  # solve exactly up to this many cells, else heuristic

app = FastAPI(title="affine-ttt play service")


class CreateSessionRequest(BaseModel):
    m: int
    n: int
    q: int
    engine: str = "ThreatGreedy"
    human_side: str = "P1"
    seed: int = 0


class MoveRequest(BaseModel):
    point: int


@dataclass
class Session:
    id: str
    state: game.GameState
    engine_kind: str
    engine: object
    human_side: Player
    engine_side: Player
    created: float
    updated: float
    lock: threading.Lock = field(default_factory=threading.Lock)


_store_lock = threading.Lock()
_sessions: OrderedDict[str, Session] = OrderedDict()


def _put(session: Session) -> None:
    with _store_lock:
        _sessions[session.id] = session
        _sessions.move_to_end(session.id)
        while len(_sessions) > MAX_SESSIONS:
            _sessions.popitem(last=False)


def _get(session_id: str) -> Session:
    with _store_lock:
        sess = _sessions.get(session_id)
        if sess is not None and time.time() - sess.updated > TTL_SECONDS:
            del _sessions[session_id]
            sess = None
    if sess is None:
        raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}")
    return sess


def _touch(session: Session) -> None:
    session.updated = time.time()
    with _store_lock:
        if session.id in _sessions:
            _sessions.move_to_end(session.id)


def _threat_payload(state: game.GameState, player: Player) -> list[dict]:
    out = []
    for threat in game.threats(state, player, 1):
        sub = state.spec.index.subspaces[threat.subspace_id]
        out.append({"subspace": list(sub.points), "missing": list(threat.missing)})
    return out


def _view(session: Session) -> dict:
    state = session.state
    spec = state.spec
    winning = None
    if state.winning_id is not None:
        winning = list(spec.index.subspaces[state.winning_id].points)
    return {
        "id": session.id,
        "q": spec.q,
        "m": spec.m,
        "n": spec.n,
        "a1": [p for p in range(spec.size) if state.a1 >> p & 1],
        "a2": [p for p in range(spec.size) if state.a2 >> p & 1],
        "to_move": state.to_move.value,
        "status": state.status.value,
        "threats": {
            "p1": _threat_payload(state, Player.P1),
            "p2": _threat_payload(state, Player.P2),
        },
        "move_log": [[player.value, point] for player, point in state.move_log],
        "winning_subspace": winning,
        "engine": session.engine_kind,
        "human_side": session.human_side.value,
    }


def _engine_reply_if_due(session: Session) -> int | None:
    state = session.state
    if state.status is Status.ONGOING and state.to_move is session.engine_side:
        point = session.engine.move(state)
        session.state = game.apply_move(state, point)
        return point
    return None


@app.post("/api/session")
def create_session(req: CreateSessionRequest) -> dict:
    if req.human_side not in ("P1", "P2"):
        raise HTTPException(status_code=400, detail=f"human_side must be P1 or P2, got {req.human_side!r}")
    try:
        state = game.new_game(req.m, req.n, req.q)
    except AffineTTTError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    human = Player(req.human_side)
    engine_side = Player.P2 if human is Player.P1 else Player.P1
    try:
        sspec = strategies.StrategySpec(req.engine, seed=req.seed)
        engine = strategies.make_strategy(sspec, state.spec.index, engine_side)
    except AffineTTTError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    now = time.time()
    session = Session(
        id=uuid.uuid4().hex,
        state=state,
        engine_kind=req.engine,
        engine=engine,
        human_side=human,
        engine_side=engine_side,
        created=now,
        updated=now,
    )
    with session.lock:
        _engine_reply_if_due(session)
    _put(session)
    return _view(session)


@app.get("/api/session/{session_id}")
def get_state(session_id: str) -> dict:
    return _view(_get(session_id))


@app.post("/api/session/{session_id}/move")
def post_move(session_id: str, req: MoveRequest) -> dict:
    session = _get(session_id)
    with session.lock:
        state = session.state
        if state.status is not Status.ONGOING:
            raise HTTPException(status_code=409, detail=f"game already finished: {state.status.value}")
        if state.to_move is not session.human_side:
            raise HTTPException(status_code=409, detail="not your turn")
        try:
            session.state = game.apply_move(state, req.point)
        except AffineTTTError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        engine_reply = _engine_reply_if_due(session)
        _touch(session)
        view = _view(session)
    view["engine_reply"] = engine_reply
    return view


@app.get("/api/session/{session_id}/hint")
def hint(session_id: str) -> dict:
    session = _get(session_id)
    with session.lock:
        state = session.state
        if state.status is not Status.ONGOING:
            raise HTTPException(status_code=409, detail=f"game already finished: {state.status.value}")
        if state.spec.size <= HINT_EXACT_LIMIT:
            result = solver.solve_state(state)
            return {"point": result.best_move, "heuristic": False,
                    "outcome_if_optimal": result.outcome.value}
        point = strategies.ThreatGreedyStrategy().move(state)
        return {"point": point, "heuristic": True}


# prime powers small enough to render and play comfortably
_SPEC_FIELDS = (2, 3, 4, 5, 7, 8, 9)
_SPEC_CELL_CAP = 625


@app.get("/api/specs")
def specs() -> dict:
    grid = []
    for q in _SPEC_FIELDS:
        for m in range(1, 5):
            if q**m > _SPEC_CELL_CAP:
                break
            for n in range(1, m + 1):
                grid.append({"m": m, "n": n, "q": q})
    engines = [
        {"kind": "Random"},
        {"kind": "ThreatGreedy"},
        {"kind": "Perfect", "note": "exact play; small boards only"},
        {"kind": "ESBreaker", "note": "potential-based defense"},
        {"kind": "PairingEven", "q_parity": "even", "board": "m = n + 1"},
        {"kind": "PairingOdd", "q_parity": "odd", "board": "m = n + 1"},
    ]
    return {"grid": grid, "engines": engines}


# ---------------------------------------------------------------------------
# static web client

# When a built browser client sits next to the package (repo checkout with
# frontend/dist present), serve it from the root path so the page and the
# API share an origin.  Absent the build, the service is API-only.
_WEBUI_DIST = Path(__file__).resolve().parents[2] / "frontend" / "dist"
if _WEBUI_DIST.is_dir():
    app.mount("/", StaticFiles(directory=str(_WEBUI_DIST), html=True), name="webui")
