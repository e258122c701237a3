import json
import math
from pathlib import Path

import pytest

from unicurve.cli import ConfigError, main, parse_config

CONFIG = """\
angles = [0.0]

[run]
dimension = 1
block_count = 2
seed = 0

[gauge]
kind = "scaled-log"
c = 1.0
b = 1.0

[[dictionary.curves]]
coefficients = [["0", "1"], ["1"]]

[[dictionary.curves]]
coefficients = [["1", "0", "1"], ["0", "1"]]

[verify]
growth_points = 40
outside_samples = 200
area_radii = 4
"""

RUNGE_CONFIG = """\
angles = [0.0]

[run]
dimension = 1
block_count = 1

[[dictionary.targets]]
N = 1.0
eps = 0.1
sigma = 1.0
components = [ {kind = "const", re = 1.0}, {kind = "exp", scale = 1.0} ]
"""


@pytest.fixture()
def cfg_path(tmp_path):
    p = tmp_path / "run.toml"
    p.write_text(CONFIG)
    return p


def test_config_rejects_unknown_keys():
    with pytest.raises(ConfigError):
        parse_config(CONFIG + "\n[run2]\nx = 1\n")
    with pytest.raises(ConfigError):
        parse_config(CONFIG.replace("seed = 0", "sneed = 0"))


def test_config_rejects_bad_angle():
    with pytest.raises(ConfigError):
        parse_config(CONFIG.replace("angles = [0.0]", "angles = [7.0]"))


def test_config_rejects_nonpositive_tolerance():
    with pytest.raises(ConfigError):
        parse_config(CONFIG + "quad_tol = -1.0\n")


def test_schedule_verify_eval_sweep(tmp_path, cfg_path, capsys):
    out = tmp_path / "out"
    rc = main(["schedule", "--config", str(cfg_path), "--out", str(out)])
    assert rc == 0
    sched = out / "schedule.json"
    assert sched.exists()
    summary = (out / "schedule_summary.txt").read_text()
    assert "margins" in summary and "block 2" in summary

    rc = main(
        ["verify", "--schedule", str(sched), "--config", str(cfg_path), "--out", str(out)]
    )
    assert rc == 0
    report = json.loads((out / "verify_report.json").read_text())
    assert report["passed"]
    assert set(report["suites"]) == {"separation", "approx", "growth", "fmt-consistency"}
    growth_csv = (out / "growth.csv").read_text().splitlines()
    assert growth_csv[0].startswith("r,T_fmt,")
    assert len(growth_csv) == 41

    # eval: one point far from the discs has |h_j| < 1
    rc = main(
        [
            "eval",
            "--schedule",
            str(sched),
            "--points",
            "10,10;0.5,0",
            "--out",
            str(out / "points.csv"),
        ]
    )
    assert rc == 0
    rows = (out / "points.csv").read_text().splitlines()
    assert rows[0] == "z_re,z_im,abs_h_1,in_disc_flag,nearest_block"
    assert len(rows) == 3
    vals = rows[1].split(",")
    assert float(vals[2]) < 1.0 and vals[3] == "0"

    # grid inside the first disc: rows flagged in_disc = 1
    sched_data = json.loads(sched.read_text())
    m1 = sched_data["blocks"][0]["modulus"]
    rc = main(
        [
            "eval",
            "--schedule",
            str(sched),
            "--grid",
            f"{m1 - 1},{m1 + 1},-1,1,3",
            "--out",
            str(out / "disc.csv"),
        ]
    )
    assert rc == 0
    disc_rows = (out / "disc.csv").read_text().splitlines()[1:]
    assert all(row.split(",")[3] == "1" for row in disc_rows)

    rc = main(
        [
            "sweep",
            "--schedule",
            str(sched),
            "--rmin",
            "1.0",
            "--count",
            "25",
            "--out",
            str(out / "sweep.csv"),
        ]
    )
    assert rc == 0
    assert len((out / "sweep.csv").read_text().splitlines()) == 26


def test_verify_catches_tampered_schedule(tmp_path, cfg_path):
    out = tmp_path / "out"
    assert main(["schedule", "--config", str(cfg_path), "--out", str(out)]) == 0
    sched_file = out / "schedule.json"
    data = json.loads(sched_file.read_text())
    data["blocks"][1]["modulus"] -= 1
    bad = tmp_path / "tampered.json"
    bad.write_text(json.dumps(data))
    rc = main(
        ["verify", "--schedule", str(bad), "--which", "separation", "--out", str(out)]
    )
    assert rc == 1


def test_determinism_byte_identical(tmp_path, cfg_path):
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        assert main(["schedule", "--config", str(cfg_path), "--out", str(out)]) == 0
        assert (
            main(
                [
                    "verify",
                    "--schedule",
                    str(out / "schedule.json"),
                    "--config",
                    str(cfg_path),
                    "--out",
                    str(out),
                ]
            )
            == 0
        )
        outs.append(out)
    for fname in ("schedule.json", "schedule_summary.txt", "verify_report.json", "growth.csv"):
        a = (outs[0] / fname).read_bytes()
        b = (outs[1] / fname).read_bytes()
        assert a == b, f"{fname} differs between runs"


def test_runge_fit_command(tmp_path, capsys):
    cfg = tmp_path / "fit.toml"
    cfg.write_text(RUNGE_CONFIG)
    rc = main(["runge-fit", "--config", str(cfg), "--out", str(tmp_path / "fit.json")])
    assert rc == 0
    printed = capsys.readouterr().out
    assert "p0:" in printed and "p1:" in printed
    data = json.loads((tmp_path / "fit.json").read_text())
    assert len(data["coefficients"]) == 2


def test_overflow_error_names_inequality(tmp_path, capsys):
    cfg = tmp_path / "slow.toml"
    cfg.write_text(
        """\
angles = [0.0]

[run]
dimension = 1
block_count = 3
magnitude_cap = 1000000000

[gauge]
kind = "iterated-log"
c = 1.0
b = 0.05

[[dictionary.curves]]
coefficients = [["0", "0", "0", "0", "0", "1"], ["1", "1", "1", "1", "1"]]
"""
    )
    rc = main(["schedule", "--config", str(cfg), "--out", str(tmp_path / "o")])
    assert rc == 2
    err = capsys.readouterr().err
    assert "iii" in err


def test_empty_schedule_growth_trivially_passes(tmp_path, cfg_path):
    # a schedule with rmin below the first disc: every case below-first-disc
    out = tmp_path / "out"
    assert main(["schedule", "--config", str(cfg_path), "--out", str(out)]) == 0
    rc = main(
        [
            "sweep",
            "--schedule",
            str(out / "schedule.json"),
            "--rmin",
            "1.0",
            "--rmax",
            "40.0",
            "--count",
            "10",
            "--out",
            str(out / "low.csv"),
        ]
    )
    assert rc == 0
    body = (out / "low.csv").read_text().splitlines()[1:]
    assert all("below-first-disc" in line for line in body)