import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from kkphase.cli import main
from kkphase.experiment import CSV_COLUMNS, read_results

SMALL_SWEEP = {
    "base": {"n_ref": 300, "j": 11},
    "n_tot_values": [5000],
    "n_s_values": [5, 30],
    "n_mc": 2,
    "master_seed": 1,
}


def write_json(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


def read_csv(path):
    with open(path) as fh:
        return list(csv.reader(fh))


def test_profile(tmp_path):
    out = tmp_path / "p.csv"
    assert main(["profile", "--alpha0l", "1", "--omega0", "0.5", "--sigma", "0.1",
                 "--interval", "0", "1", "--n-points", "5", "--out", str(out)]) == 0
    rows = read_csv(out)
    assert rows[0] == ["omega", "alpha_l", "eta", "phi"]
    centre = [float(v) for v in rows[3]]
    assert centre == [0.5, 1.0, pytest.approx(np.exp(-1), rel=1e-15), 0.0]


@pytest.mark.parametrize("name", ["gaussian", "constant", "lorentzian"])
def test_hilbert_check(tmp_path, name):
    out = tmp_path / "h.csv"
    assert main(["hilbert-check", "--j", "12", "--function", name, "--out", str(out)]) == 0
    rows = read_csv(out)
    assert rows[0] == ["x", "zhou", "pv_oracle", "infinite_line", "abs_diff"]
    table = np.array(rows[1:], dtype=float)
    assert table.shape == (17, 5)
    assert np.max(table[:, 4]) < 1e-3


def test_simulate(tmp_path):
    cfg = write_json(tmp_path / "c.json", {"n_tot": 10_000, "n_s": 20, "n_ref": 400, "j": 12})
    out = tmp_path / "r.json"
    assert main(["simulate", "--config", cfg, "--seed", "4", "--out", str(out)]) == 0
    first = json.loads(out.read_text())
    assert first["seed"] == 4 and first["delta2_eta"] > 0
    assert main(["simulate", "--config", cfg, "--seed", "4", "--out", str(out)]) == 0
    assert json.loads(out.read_text()) == first


def test_sweep_and_plot(tmp_path):
    cfg = write_json(tmp_path / "s.json", SMALL_SWEEP)
    out, svg, svg2 = tmp_path / "s.csv", tmp_path / "s.svg", tmp_path / "again.svg"
    assert main(["sweep", "--config", cfg, "--out", str(out), "--plot", str(svg), "--workers", "2"]) == 0
    rows = read_csv(out)
    assert tuple(rows[0]) == CSV_COLUMNS and len(rows) == 3
    assert main(["plot", "--in", str(out), "--out", str(svg2)]) == 0
    assert svg.read_bytes() == svg2.read_bytes()
    assert len(read_results(out).rows) == 2


def test_exit_codes(tmp_path):
    bad = write_json(tmp_path / "bad.json", dict(SMALL_SWEEP, extra=1))
    assert main(["sweep", "--config", bad, "--out", str(tmp_path / "x.csv")]) == 2
    (tmp_path / "broken.json").write_text("{not json")
    assert main(["simulate", "--config", str(tmp_path / "broken.json"), "--seed", "1", "--out", "x"]) == 2
    assert main(["simulate", "--config", str(tmp_path / "absent.json"), "--seed", "1", "--out", "x"]) == 4
    good = write_json(tmp_path / "good.json", SMALL_SWEEP)
    assert main(["sweep", "--config", good, "--out", str(tmp_path / "no" / "dir.csv")]) == 4
    empty = tmp_path / "empty.csv"
    empty.write_text(",".join(CSV_COLUMNS) + "\n")
    assert main(["plot", "--in", str(empty), "--out", str(tmp_path / "e.svg")]) == 3
    assert main(["hilbert-check", "--j", "0", "--out", str(tmp_path / "h.csv")]) == 3


def test_console_entry_point(tmp_path):
    out = tmp_path / "p.csv"
    proc = subprocess.run(
        [sys.executable, "-m", "kkphase.cli", "profile", "--n-points", "3", "--out", str(out)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert len(read_csv(out)) == 4
