import csv
import io
import json
import math
import os
import subprocess
import sys
import tempfile

import pytest

BINARY = os.environ.get("PHONON_STATS_BIN", "phonon-stats")


def run(*args, check_code=None):
    # Keep CRLF intact; CSV output uses RFC 4180 line endings.
    proc = subprocess.run([BINARY, *args], capture_output=True)
    proc.stdout = proc.stdout.decode()
    proc.stderr = proc.stderr.decode()
    if check_code is not None:
        assert proc.returncode == check_code, proc.stderr
    return proc


def test_coherent_point_json():
    out = json.loads(run("stats", "--model", "exact", "--C", "41", "--n-th", "20", check_code=0).stdout)
    report = out["report"]
    assert report["regime"] == "Coherent"
    assert abs(report["g2"] - 1.0) < 1e-12
    assert abs(report["n_ss"] - 20 / 41) < 1e-12


def test_exact_and_oracle_agree():
    exact = json.loads(run("stats", "--model", "exact", "--C", "41", "--n-th", "20", check_code=0).stdout)
    oracle = json.loads(run("stats", "--model", "oracle-reduced", "--C", "41", "--n-th", "20", check_code=0).stdout)
    assert abs(exact["report"]["n_ss"] - oracle["report"]["n_ss"]) <= 1e-6
    assert abs(exact["report"]["g2"] - oracle["report"]["g2"]) <= 1e-6
    assert oracle["report"]["diagnostics"]["dim_mech"] >= 8


def test_undefined_g2_is_null():
    out = json.loads(run("stats", "--model", "exact", "--C", "2", "--n-th", "0", check_code=0).stdout)
    assert out["report"]["g2"] is None
    assert out["report"]["regime"] == "Vacuum"


@pytest.mark.parametrize(
    "args",
    [
        ("stats", "--model", "exact", "--C", "-1", "--n-th", "1"),
        ("stats", "--model", "exact", "--C", "0", "--n-th", "1"),
        ("stats", "--model", "nonsense", "--C", "1", "--n-th", "1"),
        ("sweep", "--c-range", "1:0.1:3:log", "--nth-range", "1"),
        ("sweep", "--c-range", "1:10:3:cubic", "--nth-range", "1"),
        ("figure", "7"),
        ("stats", "--no-such-flag"),
    ],
)
def test_bad_input_exits_1(args):
    assert run(*args).returncode == 1


def test_budget_exhaustion_exits_2():
    proc = run("stats", "--model", "oracle-reduced", "--C", "0.1", "--n-th", "50", "--max-dim", "32")
    assert proc.returncode == 2
    assert "error" in json.loads(proc.stdout)


def test_sweep_csv_is_ordered_and_deterministic():
    args = ("sweep", "--model", "auto", "--c-range", "0.1:1000:9:log", "--nth-range", "0,1,20,1e10")
    one = run(*args, "--jobs", "1", check_code=0).stdout
    again = run(*args, "--jobs", "1", check_code=0).stdout
    parallel = run(*args, "--jobs", "3", check_code=0).stdout
    assert one == again == parallel
    rows = list(csv.DictReader(io.StringIO(one, newline="")))
    assert len(rows) == 36
    assert [float(r["n_th"]) for r in rows[:9]] == [0.0] * 9
    assert rows[-1]["model"] == "hitemp"
    # The switch is strict: n_th / C = 1e6 still runs the series.
    edge = json.loads(run("stats", "--model", "auto", "--C", "1000", "--n-th", "1e9", check_code=0).stdout)
    assert edge["model"] == "exact"
    for r in rows:
        if r["g2"] == "null":
            continue
        c, n, g2 = float(r["C"]), float(r["n_th"]), float(r["g2"])
        if c > 2 * n + 1:
            assert g2 < 1
        elif c < 2 * n + 1:
            assert g2 > 1


def test_config_file_with_flag_override():
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "run.json")
        with open(path, "w") as f:
            json.dump({"model": "exact", "C": 3, "n_th": 5, "format": "json"}, f)
        base = json.loads(run("stats", "--config", path, check_code=0).stdout)
        assert base["C"] == 3
        override = json.loads(run("stats", "--config", path, "--C", "11", check_code=0).stdout)
        assert override["C"] == 11
        assert abs(override["report"]["g2"] - 1.0) < 1e-12

        with open(path, "w") as f:
            json.dump({"C": [], "n_th": [1]}, f)
        assert run("validate", "--config", path).returncode == 1


def test_validate_default_grid():
    proc = run("validate", check_code=0)
    out = json.loads(proc.stdout)
    assert out["passed"]
    assert out["summary"]["points"] == 25
    assert out["summary"]["max_rel_dev_n_ss"] <= 1e-6


def test_validate_reports_exceeded_tolerance():
    proc = run("validate", "--reference", "exact", "--candidate", "hitemp", "--C", "1", "--n-th", "100,1000")
    assert proc.returncode == 3
    rows = json.loads(proc.stdout)["points"]
    assert rows[1]["rel_dev_g2"] < rows[0]["rel_dev_g2"]


def test_figure_files():
    with tempfile.TemporaryDirectory() as tmp:
        run("figure", "6", "--out", tmp, check_code=0)
        assert sorted(os.listdir(tmp)) == ["fig6.csv", "fig6_plot.py"]
        with open(os.path.join(tmp, "fig6.csv"), newline="") as f:
            rows = list(csv.DictReader(f))
        assert list(rows[0]) == ["n", "P_C1", "P_C41", "P_C1000"]
        assert float(rows[0]["P_C1000"]) + float(rows[1]["P_C1000"]) >= 0.99
        with open(os.path.join(tmp, "fig6_plot.py")) as f:
            script = f.read()
        assert "fig6.csv" in script


def test_figure_stdout_matches_file():
    with tempfile.TemporaryDirectory() as tmp:
        run("figure", "3", "--out", tmp, check_code=0)
        with open(os.path.join(tmp, "fig3.csv"), newline="") as f:
            on_disk = f.read()
    assert run("figure", "3", "--out", "-", check_code=0).stdout == on_disk


def test_laboratory_parameters():
    out = json.loads(
        run(
            "stats", "--model", "exact", "--g0", "0.01", "--kappa", "1e4", "--gamma", "1",
            "--omega-m", "1e6", "--eta", "1e5", "--n-th", "2", check_code=0,
        ).stdout
    )
    derived = out["derived"]
    assert math.isclose(derived["gamma_opt"], 8 * derived["g"] ** 2 / 1e4, rel_tol=1e-12)
    assert math.isclose(out["C"], derived["gamma_opt"], rel_tol=1e-12)
    assert out["n_th"] == 2


def test_export_liouvillian():
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "L.txt")
        run("stats", "--model", "oracle-reduced", "--C", "3", "--n-th", "1", "--trunc", "6",
            "--export-liouvillian", path, check_code=0)
        with open(path) as f:
            lines = f.read().splitlines()
        header = dict(line[2:].split(" ", 1) for line in lines if line.startswith("#"))
        assert header["dim_mech"] == "6"
        body = [line for line in lines if not line.startswith("#")]
        assert len(body) == int(header["nnz"])
        # Columns sum to zero over diagonal rows: trace preservation.
        sums = {}
        for line in body:
            row, col, re, _ = line.split()
            if int(row) % 7 == 0:
                sums[col] = sums.get(col, 0.0) + float(re)
        assert max(abs(v) for v in sums.values()) < 1e-12


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
