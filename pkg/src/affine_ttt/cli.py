"""Command-line front door: solve, play, bounds, extremal, blocking, verify, serve.

Exit codes: 0 on success, 1 on a domain error (anything raised by the
package), 2 on a usage error (argparse's own convention).  Given identical
arguments, seed, and scripted input, stdout is byte-identical: wall-clock
fields are stripped from every payload before printing.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

import numpy as np

from . import bounds, extremal, game, geometry, solver, strategies
from .errors import AffineTTTError, IllegalMove, InvalidArgs
from .game import Player, Status


# ---------------------------------------------------------------------------
# board rendering: grid of grids, outer block indexed by the high coordinates


def _grid_lines(q: int, cell_of_xy) -> list[str]:
    return [" ".join(cell_of_xy(x, y) for x in range(q)) for y in range(q)]


def render_cells(q: int, m: int, cell_of_point, width: int = 1) -> str:
    """Lay the q^m cells out as text.  Dimension 1 is a row, 2 a grid; for
    3 and 4 the board splits into low-coordinate inner grids arranged by the
    high coordinates, one outer row for m = 3 and an outer grid for m = 4.
    Coordinate 0 is the least significant digit of the point index, so the
    inner grid walks x = coordinate 0 across and y = coordinate 1 down.
    """
    codec = geometry.PointCodec(q, m)

    def cell(*coords):
        return format(cell_of_point(codec.encode(coords)), f">{width}")

    if m == 1:
        return " ".join(cell(x) for x in range(q))
    if m == 2:
        return "\n".join(_grid_lines(q, lambda x, y: cell(x, y)))
    if m == 3:
        blocks = [_grid_lines(q, lambda x, y, z=z: cell(x, y, z)) for z in range(q)]
        return "\n".join("   ".join(block[row] for block in blocks) for row in range(q))
    if m == 4:
        out = []
        for w in range(q):
            blocks = [
                _grid_lines(q, lambda x, y, z=z, w=w: cell(x, y, z, w)) for z in range(q)
            ]
            out.extend("   ".join(block[row] for block in blocks) for row in range(q))
            if w != q - 1:
                out.append("")
        return "\n".join(out)
    raise InvalidArgs(f"grid rendering supports m <= 4, got m={m}")


def render_board(state: game.GameState) -> str:
    spec = state.spec
    if spec.m > 4:
        p1 = sorted(p for p in range(spec.size) if state.a1 >> p & 1)
        p2 = sorted(p for p in range(spec.size) if state.a2 >> p & 1)
        return f"P1 {p1}\nP2 {p2}"

    def cell(p):
        if state.a1 >> p & 1:
            return "X"
        if state.a2 >> p & 1:
            return "O"
        return "."

    return render_cells(spec.q, spec.m, cell)


def render_legend(q: int, m: int) -> str:
    """Same layout with every cell showing its point id."""
    width = len(str(q**m - 1))
    return render_cells(q, m, lambda p: str(p), width)


# ---------------------------------------------------------------------------
# helpers


def _emit(text: str, out: str | None) -> None:
    print(text)
    if out:
        Path(out).write_text(text if text.endswith("\n") else text + "\n")


def _parse_range(token: str) -> list[int]:
    """Accept "4" or "1..5" (inclusive on both ends)."""
    if ".." in token:
        lo_s, hi_s = token.split("..", 1)
        lo, hi = int(lo_s), int(hi_s)
        if hi < lo:
            raise InvalidArgs(f"empty range {token!r}")
        return list(range(lo, hi + 1))
    return [int(token)]


def _parse_engine(token: str) -> tuple[Player, str]:
    """Engine flag syntax: KIND, or P1:KIND / P2:KIND to pick its side
    (the engine defends as P2 when no side is given)."""
    side = Player.P2
    if ":" in token:
        side_s, token = token.split(":", 1)
        if side_s not in ("P1", "P2"):
            raise InvalidArgs(f"engine side must be P1 or P2, got {side_s!r}")
        side = Player(side_s)
    return side, token


# ---------------------------------------------------------------------------
# subcommands


def _cmd_solve(args) -> int:
    limits = solver.SolveLimits(budget_nodes=args.budget_nodes, budget_ms=args.budget_ms)
    res = solver.solve(args.m, args.n, args.q, limits)
    payload = {
        "m": res.m,
        "n": res.n,
        "q": res.q,
        "outcome": res.outcome.value,
        "best_move": res.best_move,
        "nodes": res.nodes,
    }
    _emit(json.dumps(payload), args.out)
    return 0


def _cmd_play(args) -> int:
    state = game.new_game(args.m, args.n, args.q)
    engine_side, kind = _parse_engine(args.engine)
    sspec = strategies.StrategySpec(kind, seed=args.seed or 0)
    engine = strategies.make_strategy(sspec, state.spec.index, engine_side)
    human_side = Player.P1 if engine_side is Player.P2 else Player.P2

    print(f"board ({args.m},{args.n})_{args.q}: {kind} plays {engine_side.value}, "
          f"you play {human_side.value}")
    if args.m <= 4:
        print("cell ids:")
        print(render_legend(args.q, args.m))

    while state.status is Status.ONGOING:
        if state.to_move is engine_side:
            point = engine.move(state)
            state = game.apply_move(state, point)
            print(f"{engine_side.value} ({kind}) plays {point}")
        else:
            line = sys.stdin.readline()
            if not line:
                print("input ended before the game did")
                print("-- transcript --")
                _emit(game.format_transcript(state).rstrip("\n"), args.out)
                return 1
            token = line.strip()
            if not token:
                continue
            try:
                point = int(token)
            except ValueError:
                print(f"illegal move {token!r}: not a point id")
                continue
            try:
                state = game.apply_move(state, point)
            except IllegalMove as exc:
                print(f"illegal move {token!r}: {exc}")
                continue
            print(f"{human_side.value} (you) plays {point}")
        print(render_board(state))

    print("-- transcript --")
    _emit(game.format_transcript(state).rstrip("\n"), args.out)
    return 0


_TABLE_COLUMNS = ("q", "n", "lower", "upper", "exact", "tags")


def _cmd_bounds(args) -> int:
    if args.what != "table":
        raise InvalidArgs(f"unknown bounds subcommand {args.what!r}")
    reports = [
        bounds.threshold_report(n, q)
        for q in _parse_range(args.q)
        for n in _parse_range(args.n)
    ]
    if args.json:
        _emit(json.dumps([rep.to_dict() for rep in reports], indent=2), args.out)
        return 0
    rows = []
    for rep in reports:
        tags = " ".join(
            f"{tag}={val}"
            for tag, val in list(rep.lower.items()) + [(f"^{t}", v) for t, v in rep.upper.items()]
        )
        rows.append((
            str(rep.q), str(rep.n), str(rep.lo),
            "-" if rep.hi is None else str(rep.hi),
            "=" if rep.exact else "", tags,
        ))
    widths = [
        max(len(_TABLE_COLUMNS[i]), max((len(r[i]) for r in rows), default=0))
        for i in range(len(_TABLE_COLUMNS))
    ]
    lines = ["  ".join(c.ljust(w) for c, w in zip(_TABLE_COLUMNS, widths)).rstrip()]
    for r in rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
    _emit("\n".join(lines), args.out)
    return 0


def _cmd_extremal(args) -> int:
    res = extremal.ex_search(args.m, args.n, args.q, budget=args.budget_nodes)
    if args.json:
        payload = dict(res.to_sidecar())
        payload["points"] = res.witness.points()
        _emit(json.dumps(payload), args.out)
        return 0
    mode = "exhaustive" if res.exhaustive else "heuristic"
    text = f"ex({args.m},{args.n})_{args.q} = {res.value}  [{mode}]\n" + res.to_certificate()
    _emit(text.rstrip("\n"), args.out)
    return 0


def _cmd_blocking(args) -> int:
    res = extremal.blocking_min(args.m, args.n, args.q, budget=args.budget_nodes)
    if args.json:
        payload = dict(res.to_sidecar())
        payload["points"] = res.witness.points()
        _emit(json.dumps(payload), args.out)
        return 0
    mode = "exhaustive" if res.exhaustive else "heuristic"
    text = f"beta({args.m},{args.n})_{args.q} = {res.value}  [{mode}]\n" + res.to_certificate()
    _emit(text.rstrip("\n"), args.out)
    return 0


# ---------------------------------------------------------------------------
# verification harnesses


def _check(ok: bool, label: str, failures: list[str]) -> None:
    print(("ok: " if ok else "FAIL: ") + label)
    if not ok:
        failures.append(label)


def _verify_es_strategy(seed: int, failures: list[str]) -> None:
    for m, n, q in ((2, 1, 7), (3, 2, 3)):
        index = geometry.enumerate_subspaces(m, n, q)
        rep = strategies.es_playouts(index, 10000, seed)
        _check(
            rep.completions == 0 and rep.potential_monotone,
            f"es breaker on ({m},{n})_{q}: {rep.playouts} playouts, "
            f"completions={rep.completions}, "
            f"breaker-turn potential monotone={rep.potential_monotone}",
            failures,
        )


def _verify_pairing(seed: int, failures: list[str]) -> None:
    index = geometry.enumerate_subspaces(3, 2, 2)
    rep = strategies.exhaust_verify(index, strategies.PairingStrategy(index, Player.P2, even=True))
    _check(
        rep.verified,
        f"even pairing on (3,2)_2: exhaustive, {rep.states} states, {rep.leaves} leaves",
        failures,
    )
    index3 = geometry.enumerate_subspaces(3, 2, 3)
    losses = 0
    for s in range(10000):
        final = strategies.run_match(
            index3,
            strategies.StrategySpec("Random"),
            strategies.StrategySpec("PairingOdd"),
            seed=seed * 10000 + s,
        )
        if final.status is Status.P1_WON:
            losses += 1
    _check(losses == 0, f"odd pairing on (3,2)_3: 10000 random matches, losses={losses}", failures)


def _verify_wht(seed: int, failures: list[str]) -> None:
    rng = random.Random(seed)
    worst = None
    for m in range(4, 9):
        board = 1 << m
        for _ in range(100):
            bits = 0
            for p in range(board):
                if rng.random() < 0.5:
                    bits |= 1 << p
            s = extremal.PointSet(2, m, bits)
            pts = np.array(s.points(), dtype=np.int64)
            if pts.size:
                diffs = np.bitwise_xor.outer(pts, pts).ravel()
                pair_counts = np.bincount(diffs, minlength=board)
                reference = int(pair_counts @ pair_counts)
            else:
                reference = 0
            got = extremal.count_quadruples_wht(s)
            if got != reference:
                worst = (m, got, reference)
    _check(
        worst is None,
        "quadruple counts: transform vs pair-count reference, 100 sets per m in 4..8"
        + ("" if worst is None else f" (first divergence {worst})"),
        failures,
    )


def _verify_tables(failures: list[str]) -> None:
    four = [bounds.fourier_upper_bound(n) for n in range(1, 6)]
    _check(four == [2, 4, 7, 12, 21], f"fourier upper bounds n=1..5: {four}", failures)
    row = [bounds.es_lower_bound(2, q) for q in (3, 4, 5, 7)]
    _check(row == [4, 5, 6, 8], f"potential lower bounds (2,q), q=3,4,5,7: {row}", failures)
    seq = bounds.AlphaSeq.recurrence(64)
    _check(
        all(seq[n] == bounds.alpha_closed_form(n) for n in range(1, 65)),
        "alpha recurrence equals closed form through n=64",
        failures,
    )
    rows = [(1, 2, 2), (2, 4, 4), (3, 5, 7), (4, 6, 12), (5, 7, 21)]
    ok = True
    for n, row_lo, row_hi in rows:
        rep = bounds.threshold_report(n, 2)
        ok = ok and rep.lower["geometric"] == row_lo and rep.hi == row_hi and rep.lo >= row_lo
    _check(ok, "binary table rows n=1..5 reproduced (geometric tag + min upper)", failures)
    ok = True
    for q in (2, 3, 4, 5, 7, 8, 9):
        for n in range(1, 7):
            rep = bounds.threshold_report(n, q)
            ok = ok and (rep.hi is None or rep.lo <= rep.hi)
    _check(ok, "bound ordering holds over the (n,q) grid", failures)


def _cmd_verify(args) -> int:
    failures: list[str] = []
    seed = args.seed or 0
    if args.what == "es-strategy":
        _verify_es_strategy(seed, failures)
    elif args.what == "pairing":
        _verify_pairing(seed, failures)
    elif args.what == "wht":
        _verify_wht(seed, failures)
    elif args.what == "tables":
        _verify_tables(failures)
    else:
        raise InvalidArgs(f"unknown verify subcommand {args.what!r}")
    if failures:
        print(f"{len(failures)} check(s) failed")
        return 1
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .server import app

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


# ---------------------------------------------------------------------------
# parser and dispatch


def _add_board_flags(p: argparse.ArgumentParser, *, need_m: bool = True) -> None:
    p.add_argument("-q", type=int, required=True, help="field size (prime power)")
    if need_m:
        p.add_argument("-m", type=int, required=True, help="board dimension")
    p.add_argument("-n", type=int, default=1, help="winning subspace dimension (default 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="affine-ttt",
        description="Strong positional games on affine boards: solving, play, "
        "bounds, extremal searches, verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="exact outcome from the empty board (JSON)")
    _add_board_flags(p)
    p.add_argument("--budget-nodes", type=int, default=None)
    p.add_argument("--budget-ms", type=float, default=None)
    p.add_argument("--json", action="store_true", help="accepted for uniformity; solve always prints JSON")
    p.add_argument("--out", metavar="FILE", default=None)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("play", help="play against an engine; moves read from stdin")
    _add_board_flags(p)
    p.add_argument("--engine", default="ThreatGreedy",
                   help="KIND or P1:KIND / P2:KIND (default ThreatGreedy as P2); "
                   f"kinds: {', '.join(strategies.KINDS)}")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", metavar="FILE", default=None, help="also write the transcript here")
    p.set_defaults(func=_cmd_play)

    p = sub.add_parser("bounds", help="threshold bound tables")
    p.add_argument("what", choices=["table"], help="table: assembled reports over a grid")
    p.add_argument("-q", required=True, help="field size or range, e.g. 2 or 2..5")
    p.add_argument("-n", required=True, help="subspace dimension or range, e.g. 1..5")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", metavar="FILE", default=None)
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("extremal", help="largest set containing no winning subspace")
    _add_board_flags(p)
    p.add_argument("--budget-nodes", type=int, default=None)
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", metavar="FILE", default=None, help="also write the certificate here")
    p.set_defaults(func=_cmd_extremal)

    p = sub.add_parser("blocking", help="smallest set meeting every winning subspace")
    _add_board_flags(p)
    p.add_argument("--budget-nodes", type=int, default=None)
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", metavar="FILE", default=None, help="also write the certificate here")
    p.set_defaults(func=_cmd_blocking)

    p = sub.add_parser("verify", help="re-run a verification harness")
    p.add_argument("what", choices=["es-strategy", "pairing", "wht", "tables"])
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("serve", help="HTTP play service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=_cmd_serve)

    return parser


def dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse prints the synopsis itself
        return int(exc.code or 0)
    try:
        return args.func(args)
    except AffineTTTError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
