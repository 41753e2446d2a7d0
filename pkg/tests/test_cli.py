"""Dispatch, rendering, scripted play, table output, verify harnesses."""

import io
import json

import pytest

from affine_ttt import game
from affine_ttt.cli import dispatch, render_cells, render_legend


def run_cli(argv, capsys, stdin_text=None, monkeypatch=None):
    if stdin_text is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin_text))
    code = dispatch(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------------------
# solve


def test_solve_emits_json(capsys):
    code, out, _ = run_cli(["solve", "-q", "3", "-m", "2", "-n", "1"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["outcome"] == "P1Win"
    assert payload["best_move"] == 0
    assert isinstance(payload["nodes"], int)
    assert "elapsed_ms" not in payload  # stdout must be byte-reproducible


def test_solve_oversize_board_is_domain_error(capsys):
    code, out, err = run_cli(["solve", "-q", "9", "-m", "9"], capsys)
    assert code == 1
    assert out == ""
    assert "BoardTooLarge" in err


def test_usage_errors_exit_two(capsys):
    assert run_cli(["solve"], capsys)[0] == 2
    assert run_cli(["no-such-command"], capsys)[0] == 2
    assert run_cli([], capsys)[0] == 2


def test_solve_out_file(tmp_path, capsys):
    target = tmp_path / "result.json"
    code, out, _ = run_cli(
        ["solve", "-q", "2", "-m", "2", "-n", "1", "--out", str(target)], capsys
    )
    assert code == 0
    assert json.loads(target.read_text()) == json.loads(out)


# ---------------------------------------------------------------------------
# rendering


def test_render_legend_inner_low_outer_high():
    # inner grid walks coordinate 0 across and 1 down; coordinate 2 picks
    # the block; coordinate 3 the block row
    assert render_legend(2, 1) == "0 1"
    assert render_legend(2, 2) == "0 1\n2 3"
    assert render_legend(2, 3) == "0 1   4 5\n2 3   6 7"
    # the exact m=4 layout, written out with its right-aligned width-2 cells
    assert render_legend(2, 4) == (
        " 0  1    4  5\n"
        " 2  3    6  7\n"
        "\n"
        " 8  9   12 13\n"
        "10 11   14 15"
    )


def test_render_cells_occupancy():
    cells = {0: "X", 3: "O"}
    out = render_cells(3, 2, lambda p: cells.get(p, "."))
    assert out == "X . .\nO . .\n. . ."


# ---------------------------------------------------------------------------
# play


def test_play_scripted_draw(capsys, monkeypatch):
    code, out, _ = run_cli(
        ["play", "-q", "2", "-m", "1", "-n", "1"], capsys, stdin_text="0\n",
        monkeypatch=monkeypatch,
    )
    assert code == 0
    assert "RESULT DRAW" in out


def test_play_engine_first_transcript_round_trips(capsys, monkeypatch):
    code, out, _ = run_cli(
        ["play", "-q", "2", "-m", "2", "-n", "1", "--engine", "P1:Perfect"],
        capsys, stdin_text="3\n", monkeypatch=monkeypatch,
    )
    assert code == 0
    transcript = out.split("-- transcript --\n", 1)[1]
    state = game.replay_transcript(transcript)
    assert state.status is game.Status.P1_WON
    assert transcript.rstrip("\n").endswith("RESULT P1WIN")


def test_play_malformed_tokens_reprompt(capsys, monkeypatch):
    code, out, _ = run_cli(
        ["play", "-q", "2", "-m", "2", "-n", "1"], capsys,
        stdin_text="zzz\n9\n0\n2\n3\n", monkeypatch=monkeypatch,
    )
    assert code == 0
    assert out.count("illegal move") == 2
    assert "RESULT P1WIN" in out


def test_play_eof_before_finish(capsys, monkeypatch):
    code, out, _ = run_cli(
        ["play", "-q", "3", "-m", "2", "-n", "1"], capsys, stdin_text="0\n",
        monkeypatch=monkeypatch,
    )
    assert code == 1
    assert "input ended" in out
    assert "RESULT" not in out


def test_play_stdout_reproducible(capsys, monkeypatch):
    argv = ["play", "-q", "2", "-m", "2", "-n", "1", "--engine", "P1:Perfect"]
    outs = []
    for _ in range(2):
        code, out, _ = run_cli(argv, capsys, stdin_text="3\n", monkeypatch=monkeypatch)
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1]


def test_play_writes_transcript_file(tmp_path, capsys, monkeypatch):
    target = tmp_path / "game.txt"
    code, out, _ = run_cli(
        ["play", "-q", "2", "-m", "1", "-n", "1", "--out", str(target)],
        capsys, stdin_text="0\n", monkeypatch=monkeypatch,
    )
    assert code == 0
    replayed = game.replay_transcript(target.read_text())
    assert replayed.status is game.Status.DRAW


# ---------------------------------------------------------------------------
# bounds table


def test_bounds_table_text(capsys):
    code, out, _ = run_cli(["bounds", "table", "-q", "2", "-n", "1..5"], capsys)
    assert code == 0
    lines = out.rstrip("\n").split("\n")
    assert lines[0].split() == ["q", "n", "lower", "upper", "exact", "tags"]
    assert len(lines) == 6
    row3 = lines[3].split()
    assert row3[:4] == ["2", "3", "5", "7"]
    # reproducible bytes
    assert run_cli(["bounds", "table", "-q", "2", "-n", "1..5"], capsys)[1] == out


def test_bounds_table_json(capsys):
    code, out, _ = run_cli(
        ["bounds", "table", "-q", "2", "-n", "1..5", "--json"], capsys
    )
    assert code == 0
    reports = json.loads(out)
    assert len(reports) == 5
    by_n = {rep["n"]: rep for rep in reports}
    assert by_n[4]["interval"] == [7, 12]
    assert by_n[2]["exact"] is True


def test_bounds_table_grid_over_q(capsys):
    code, out, _ = run_cli(
        ["bounds", "table", "-q", "2..3", "-n", "2", "--json"], capsys
    )
    assert code == 0
    reports = json.loads(out)
    assert [(rep["q"], rep["n"]) for rep in reports] == [(2, 2), (3, 2)]


def test_bounds_table_bad_field_is_domain_error(capsys):
    code, _, err = run_cli(["bounds", "table", "-q", "6", "-n", "2"], capsys)
    assert code == 1
    assert "InvalidArgs" in err


# ---------------------------------------------------------------------------
# extremal / blocking


def test_extremal_cli_text(capsys):
    code, out, _ = run_cli(["extremal", "-q", "2", "-m", "4", "-n", "2"], capsys)
    assert code == 0
    assert out.startswith("ex(4,2)_2 = 6  [exhaustive]\n")


def test_extremal_cli_json(capsys):
    code, out, _ = run_cli(
        ["extremal", "-q", "2", "-m", "4", "-n", "2", "--json"], capsys
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["value"] == 6 and payload["exhaustive"] is True
    assert len(payload["points"]) == 6


def test_extremal_budget_falls_back_to_heuristic(capsys):
    code, out, _ = run_cli(
        ["extremal", "-q", "2", "-m", "5", "-n", "2", "--budget-nodes", "10", "--json"],
        capsys,
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["exhaustive"] is False
    assert payload["value"] == len(payload["points"])


def test_blocking_cli_json(capsys):
    code, out, _ = run_cli(
        ["blocking", "-q", "3", "-m", "2", "-n", "1", "--json"], capsys
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["value"] == 5 and payload["exhaustive"] is True


def test_blocking_budget_is_domain_error(capsys):
    code, _, err = run_cli(
        ["blocking", "-q", "3", "-m", "2", "-n", "1", "--budget-nodes", "1"], capsys
    )
    assert code == 1
    assert "ResourceExhausted" in err


def test_extremal_certificate_out_file(tmp_path, capsys):
    target = tmp_path / "witness.txt"
    code, out, _ = run_cli(
        ["extremal", "-q", "2", "-m", "4", "-n", "2", "--out", str(target)], capsys
    )
    assert code == 0
    assert target.read_text() == out


# ---------------------------------------------------------------------------
# verify


def test_verify_tables(capsys):
    code, out, _ = run_cli(["verify", "tables"], capsys)
    assert code == 0
    lines = out.rstrip("\n").split("\n")
    assert len(lines) == 5
    assert all(line.startswith("ok: ") for line in lines)


def test_verify_wht(capsys):
    code, out, _ = run_cli(["verify", "wht", "--seed", "11"], capsys)
    assert code == 0
    assert out.startswith("ok: quadruple counts")
