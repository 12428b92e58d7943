"""CLI subcommands, wire formats, golden-file byte stability."""

import hashlib
import json
import math
import subprocess
import sys
from fractions import Fraction as F
from pathlib import Path

import pytest

from snackjack import cli, formats
from snackjack.oracle import GameParams

GOLDEN = Path(__file__).parent / "golden"
HALF_PI = math.pi / 2

SWEEP65_SHA256 = "d3d262832ff2442f09f8cc313ce6944cc7113c26fc1b04cf37b834cce758ec18"


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, out


@pytest.mark.parametrize(
    "token, value",
    [
        ("pi/2", math.pi / 2),
        ("pi", math.pi),
        ("3pi/8", 3 * math.pi / 8),
        ("PI / 4", math.pi / 4),
        ("0", 0.0),
        ("0.75", 0.75),
        (1.5, 1.5),
    ],
)
def test_parse_angle(token, value):
    assert formats.parse_angle(token) == pytest.approx(value)


def test_parse_angle_rejects_garbage():
    with pytest.raises(ValueError):
        formats.parse_angle("two pi")


def test_format_angle_round_trip():
    for token in ("0", "pi/8", "pi/4", "3pi/8", "pi/2"):
        assert formats.format_angle(formats.parse_angle(token)) == token


def test_fraction_wire_format():
    assert formats.format_fraction(F(-1, 60)) == "-1/60"
    assert formats.format_fraction(F(1)) == "1/1"
    assert formats.format_fraction(F(0)) == "0/1"
    assert formats.format_fraction(0.25) is None


def test_tables_text_golden(capsys):
    code, out = run_cli(capsys, "tables", "--classical")
    assert code == 0
    assert out == GOLDEN.joinpath("table_classical.txt").read_text()


def test_tables_quantum_golden(capsys):
    code, out = run_cli(capsys, "tables", "--gamma", "pi/2", "--theta", "pi/2")
    assert code == 0
    assert out == GOLDEN.joinpath("table_quantum.txt").read_text()


def test_tables_json(capsys):
    code, out = run_cli(capsys, "tables", "--format", "json",
                        "--gamma", "pi/2", "--theta", "pi/2")
    assert code == 0
    payload = json.loads(out)
    assert len(payload["rows"]) == 16
    row13 = payload["rows"][12]
    assert row13["e_std"] == {"fraction": "4/5", "value": 0.8}
    assert row13["e_10"]["fraction"] == "1/10"
    assert row13["best"] == ["I", "Y"]
    assert sum(r["cases"] for r in payload["rows"]) == 168


def test_tables_csv_headers(capsys):
    code, out = run_cli(capsys, "tables", "--format", "csv", "--classical")
    lines = out.splitlines()
    assert lines[0] == "row,player,up,e_std,e_hit,cases,best"
    assert len(lines) == 17


def test_sweep_csv_golden(tmp_path, capsys):
    out_file = tmp_path / "sweep.csv"
    code = cli.main(["sweep", "--resolution", "5", "-o", str(out_file), "--no-figure"])
    assert code == 0
    assert out_file.read_text() == GOLDEN.joinpath("sweep_5.csv").read_text()


def test_sweep_csv_schema_and_order(capsys):
    code, out = run_cli(capsys, "sweep", "--resolution", "3", "--no-figure")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "gamma,theta,expectation"
    assert len(lines) == 1 + 9
    rows = [tuple(float(x) for x in ln.split(",")) for ln in lines[1:]]
    gammas = [r[0] for r in rows]
    thetas = [r[1] for r in rows]
    # row-major with theta varying fastest
    assert gammas == sorted(gammas)
    assert thetas[:3] == thetas[3:6] == thetas[6:]
    # corners hit the known surface values
    by_angle = {(g, t): v for g, t, v in rows}
    assert by_angle[(0.0, 0.0)] == pytest.approx(float(F(-1, 60)))
    assert by_angle[(HALF_PI, HALF_PI)] == pytest.approx(float(F(43, 420)))
    assert by_angle[(math.pi / 4, HALF_PI)] == pytest.approx(float(F(1, 56)))
    # theta = 0 column flat at the classical value
    for g in (0.0, math.pi / 4, HALF_PI):
        assert by_angle[(g, 0.0)] == pytest.approx(float(F(-1, 60)))


def test_sweep_surface_regression(capsys):
    code, out = run_cli(capsys, "sweep", "--resolution", "65", "--no-figure")
    assert code == 0
    assert hashlib.sha256(out.encode()).hexdigest() == SWEEP65_SHA256


def test_sweep_writes_figure_alongside_csv(tmp_path):
    out_file = tmp_path / "surface.csv"
    code = cli.main(["sweep", "--resolution", "5", "-o", str(out_file)])
    assert code == 0
    assert out_file.exists()
    png = tmp_path / "surface.png"
    assert png.exists() and png.stat().st_size > 0
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_simulate_json_deterministic(capsys):
    args = ["simulate", "--gamma", "pi/4", "--theta", "pi/2", "--strategy", "Y",
            "--hands", "2000", "--seed", "9", "--row", "13", "--format", "json",
            "--no-figure"]
    code, first = run_cli(capsys, *args)
    assert code == 0
    code, second = run_cli(capsys, *args)
    assert first == second
    payload = json.loads(first)
    assert payload["hands"] == 2000
    assert set(payload["payoff_counts"]) <= {"-1", "0", "1"}
    assert sum(payload["payoff_counts"].values()) == 2000
    assert -1.0 <= payload["mean"] <= 1.0


def test_simulate_text_with_figure(tmp_path):
    out_file = tmp_path / "run.txt"
    code = cli.main([
        "simulate", "--hands", "3000", "--seed", "4", "--strategy", "I",
        "-o", str(out_file),
    ])
    assert code == 0
    assert "mean payoff:" in out_file.read_text()
    assert (tmp_path / "run.png").exists()


def test_tables_zero_entanglement_aliases_classical_sets(capsys):
    code, out = run_cli(capsys, "tables", "--gamma", "0", "--theta", "0",
                        "--format", "json")
    assert code == 0
    quantum = json.loads(out)["rows"]
    _, classical = run_cli(capsys, "tables", "--classical", "--format", "json")
    for qrow, crow in zip(quantum, json.loads(classical)["rows"]):
        want = set(crow["best"])
        if "X" in want:
            want.add("Y")
        if "I" in want:
            want.add("Z")
        assert set(qrow["best"]) == want


def test_simulate_rejects_unknown_strategy():
    with pytest.raises(SystemExit):
        cli.main(["simulate", "--strategy", "Q"])


def test_bad_angle_is_a_usage_error():
    with pytest.raises(SystemExit):
        cli.main(["tables", "--gamma", "pie"])


def test_verify_exit_codes(monkeypatch, capsys):
    from snackjack import acceptance
    from snackjack.acceptance import CriterionResult

    ok = CriterionResult("x", True, "fine", 0.0)
    bad = CriterionResult("y", False, "broken", 0.0)
    monkeypatch.setattr(acceptance, "run_all", lambda: [ok, ok])
    code, out = run_cli(capsys, "verify")
    assert code == 0
    assert "2/2 criteria passed" in out
    monkeypatch.setattr(acceptance, "run_all", lambda: [ok, bad])
    code, out = run_cli(capsys, "verify")
    assert code == 1
    assert "1/2 criteria passed" in out


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "snackjack.cli", "tables", "--classical"],
        capture_output=True, text=True, timeout=120,
    )
    assert proc.returncode == 0
    assert proc.stdout == GOLDEN.joinpath("table_classical.txt").read_text()
