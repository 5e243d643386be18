import json
import subprocess
import sys

import numpy as np
import pytest

from colrepcs.cli import SEED_ENV, main
from colrepcs.io import load_matrix, save_matrix
from colrepcs.sensing import SensingMatrix


def run(capsys, *argv):
    rc = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return rc, out, err


def assert_one_line_error(rc, err, expect_rc=None):
    assert rc != 0 if expect_rc is None else rc == expect_rc
    lines = err.strip().splitlines()
    assert len(lines) == 1 and lines[0].startswith("error: ")
    return lines[0]


# -- construct ---------------------------------------------------------------------------

def test_construct_example1_summary(capsys, tmp_path):
    f = tmp_path / "e1.json"
    rc, out, _ = run(capsys, "construct", "example1", "--p", 5, "--out", f)
    assert rc == 0
    assert out.startswith("25x125 mu=0.200000 welch=0.179605 ratio=1.114")
    assert "claimed=0.200000" in out and "method=full" in out and "rip_kmax=6" in out
    first = f.read_bytes()
    run(capsys, "construct", "example1", "--p", 5, "--out", f)
    assert f.read_bytes() == first
    assert load_matrix(f).shape == (25, 125)


def test_construct_not_prime(capsys):
    rc, _, err = run(capsys, "construct", "example1", "--p", 4)
    assert "4 is not prime" in assert_one_line_error(rc, err)


def test_construct_example3(capsys, tmp_path):
    f = tmp_path / "e3.json"
    rc, out, _ = run(capsys, "construct", "example3", "--q", 4, "--k", 2, "--out", f)
    assert rc == 0 and out.startswith("8x16 mu=0.500000")
    S = load_matrix(f)
    assert S.shape == (8, 16) and not S.is_complex
    assert set(np.unique(np.round(S.entries, 12))) <= {0.0, round(2 ** -0.5, 12)}


def test_construct_csv_format(capsys, tmp_path):
    f = tmp_path / "e2.csv"
    rc, out, _ = run(capsys, "construct", "example2", "--p", 3, "--out", f, "--format", "csv")
    assert rc == 0 and out.startswith("6x27 mu=0.500000")
    assert len(f.read_text().splitlines()) == 6


def test_gaussian_seed_and_env_override(capsys, tmp_path, monkeypatch):
    a, b, c = (tmp_path / n for n in ("a.json", "b.json", "c.json"))
    run(capsys, "construct", "gaussian", "--m", 5, "--n", 9, "--seed", 3, "--out", a)
    run(capsys, "construct", "gaussian", "--m", 5, "--n", 9, "--seed", 3, "--out", b)
    assert a.read_bytes() == b.read_bytes()
    monkeypatch.setenv(SEED_ENV, "4")
    run(capsys, "construct", "gaussian", "--m", 5, "--n", 9, "--seed", 3, "--out", c)
    assert c.read_bytes() != a.read_bytes()


def test_usage_errors(capsys):
    rc, _, err = run(capsys, "construct", "example1", "--p", 3, "--bogus")
    assert_one_line_error(rc, err, 2)
    rc, _, err = run(capsys, "construct", "hadamard")
    assert_one_line_error(rc, err, 2)
    rc, _, err = run(capsys, "construct", "example1")
    assert "--p" in assert_one_line_error(rc, err, 2)
    rc, _, err = run(capsys)
    assert_one_line_error(rc, err, 2)


# -- analyze -------------------------------------------------------------------------------

def test_analyze_example1(capsys, tmp_path):
    f, rep = tmp_path / "e1.json", tmp_path / "rep.json"
    run(capsys, "construct", "example1", "--p", 5, "--out", f)
    rc, out, _ = run(capsys, "analyze", f, "--out", rep)
    assert rc == 0 and "mu=0.200000" in out
    d = json.loads(rep.read_text())
    assert abs(d["coherence"] - 0.2) < 1e-9
    assert d["method"] == "full" and d["pairs"] == 125 * 124 // 2
    assert d["rip_k_max"] == 6
    assert all(1 <= i <= 125 for i in d["pair"])


def test_analyze_single_column(capsys, tmp_path):
    f = tmp_path / "one.json"
    save_matrix(SensingMatrix(np.array([[1.0], [0.0]])), f)
    rc, _, err = run(capsys, "analyze", f)
    assert "need >= 2 columns" in assert_one_line_error(rc, err, 1)


def test_analyze_malformed(capsys, tmp_path):
    f = tmp_path / "bad.json"
    f.write_text('{"m": 2,\n  "n": }')
    rc, _, err = run(capsys, "analyze", f)
    assert "line 2" in assert_one_line_error(rc, err, 1)
    rc, _, err = run(capsys, "analyze", tmp_path / "missing.json")
    assert_one_line_error(rc, err, 1)


def test_analyze_sampled_example4(capsys, tmp_path):
    f, rep = tmp_path / "e4.json", tmp_path / "rep.json"
    rc, out, _ = run(capsys, "resize", "example4", "--p", 3, "--out", f)
    assert rc == 0 and "bound=0.555556" in out
    rc, _, _ = run(capsys, "analyze", f, "--max-pairs", 1000, "--samples", 20000, "--seed", 1,
                   "--out", rep)
    d = json.loads(rep.read_text())
    assert d["method"] == "sampled" and d["pairs"] == 20000 and d["seed"] == 1
    assert d["coherence"] <= 5 / 9 + 1e-10
    assert abs(d["claimed_coherence"] - 5 / 9) < 1e-12


# -- resize / compare -----------------------------------------------------------------------

def test_resize_kronecker_and_pattern(capsys, tmp_path):
    e1, kr, cr, pat, rep = (tmp_path / n for n in ("e1.json", "kr.json", "cr.json", "p.json", "r.json"))
    run(capsys, "construct", "example1", "--p", 2, "--out", e1)
    rc, out, _ = run(capsys, "resize", "kronecker", e1, e1, "--out", kr)
    assert rc == 0 and out.startswith("16x64 mu=0.500000")
    pat.write_text(json.dumps({"entries": [[1, 2, 3, 4], [2, 3, 4, 1]], "one_based": True}))
    rc, out, _ = run(capsys, "resize", "pattern", e1, pat, "--out", cr, "--report", rep)
    assert rc == 0 and out.startswith("8x4")
    d = json.loads(rep.read_text())
    assert d["pattern"] == {"N": 2, "L": 4, "d_P": 0}
    assert d["coherence"]["coherence"] <= d["bound"] + 1e-10
    rc, _, err = run(capsys, "resize", "kronecker", e1)
    assert_one_line_error(rc, err, 2)


def test_compare(capsys, tmp_path):
    f = tmp_path / "cmp.json"
    rc, out, _ = run(capsys, "compare", "--p", 3, 5, 7, "--out", f)
    lines = out.strip().splitlines()
    assert rc == 0 and len(lines) == 3
    assert lines[0].endswith("winner=kronecker")
    assert lines[1] == "p=5 column_replacement=0.360000 kronecker=0.439941 winner=column_replacement"
    assert [r["winner"] for r in json.loads(f.read_text())] == ["kronecker", "column_replacement",
                                                                "column_replacement"]


# -- simulate ----------------------------------------------------------------------------------

SIM_CONFIG = {
    "seed": 42,
    "trials": 40,
    "matrices": [{"kind": "example1", "p": 3}, {"kind": "gaussian", "m": 9, "n": 27}],
    "scenarios": [
        {"name": "sparsity", "type": "sparsity", "sparsity": {"start": 1, "stop": 4}},
        {"name": "noise", "type": "snr", "k": 2, "snr_db": [0, 20, 40]},
    ],
}


def write_config(path, cfg):
    path.write_text(json.dumps(cfg))
    return path


def test_simulate_outputs_and_determinism(capsys, tmp_path):
    cfg = write_config(tmp_path / "cfg.json", SIM_CONFIG)
    rc, _, _ = run(capsys, "simulate", cfg, "--out", tmp_path / "a")
    assert rc == 0
    names = sorted(p.name for p in (tmp_path / "a").iterdir())
    assert names == ["noise_example1_p3.csv", "noise_gaussian_9x27.csv", "sparsity_example1_p3.csv",
                     "sparsity_gaussian_9x27.csv", "summary.json"]
    rows = (tmp_path / "a" / "sparsity_example1_p3.csv").read_text().splitlines()
    assert rows[0] == "x_axis_value,recovery_pct,mean_output_snr_db,trials"
    assert [r.split(",")[0] for r in rows[1:]] == ["1", "2", "3", "4"]
    assert rows[1].split(",")[1] == "100.0"
    run(capsys, "--threads", 3, "simulate", cfg, "--out", tmp_path / "b")
    for name in names:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    summary = json.loads((tmp_path / "a" / "summary.json").read_text())
    assert summary["seed"] == 42 and len(summary["results"]) == 4


def test_simulate_env_seed(capsys, tmp_path, monkeypatch):
    cfg = write_config(tmp_path / "cfg.json", SIM_CONFIG)
    run(capsys, "simulate", cfg, "--out", tmp_path / "a")
    monkeypatch.setenv(SEED_ENV, "7")
    run(capsys, "simulate", cfg, "--out", tmp_path / "b")
    assert json.loads((tmp_path / "b" / "summary.json").read_text())["seed"] == 7
    a = (tmp_path / "a" / "noise_gaussian_9x27.csv").read_text()
    assert a != (tmp_path / "b" / "noise_gaussian_9x27.csv").read_text()


@pytest.mark.parametrize("mutate", [
    lambda c: c["scenarios"][0].update(sparsity=[]),
    lambda c: c["scenarios"][0].update(sparsity={"start": 4, "stop": 1}),
    lambda c: c.update(colour="red"),
    lambda c: c.update(trials=0),
    lambda c: c["scenarios"][1].pop("k"),
    lambda c: c["matrices"][0].update(kind="hadamard"),
], ids=["empty-list", "empty-range", "unknown-key", "zero-trials", "snr-without-k", "bad-kind"])
def test_simulate_config_errors(capsys, tmp_path, mutate):
    cfg = json.loads(json.dumps(SIM_CONFIG))
    mutate(cfg)
    rc, _, err = run(capsys, "simulate", write_config(tmp_path / "cfg.json", cfg), "--out", tmp_path / "o")
    assert_one_line_error(rc, err, 1)


def test_simulate_invalid_json(capsys, tmp_path):
    f = tmp_path / "cfg.json"
    f.write_text("{\n\n  nope")
    rc, _, err = run(capsys, "simulate", f, "--out", tmp_path / "o")
    assert "line 3" in assert_one_line_error(rc, err, 1)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "colrepcs", "compare", "--p", "5"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.startswith("p=5 column_replacement=0.360000")
