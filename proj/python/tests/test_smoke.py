import json
import math
import os
import pathlib
import subprocess

import numpy as np
import pytest

import rankbm

ROOT = pathlib.Path(__file__).resolve().parents[2]
CLI = os.environ.get("RANKBM_CLI", str(ROOT / "build" / "rankbm"))


def run_cli(*args):
    return subprocess.run([CLI, *args], capture_output=True, text=True)


def test_rates_examples():
    assert rankbm.infinite_rates(rankbm.DriftSpec.atlas(), 1.0, 4) == [3, 4, 5, 6]
    assert rankbm.finite_stationary_rates(rankbm.DriftSpec.atlas(), 2) == [1.0]
    ap = rankbm.approximant(rankbm.DriftSpec.atlas(), 1.0, 2)
    assert ap["rates"] == [3, 4, 2]
    assert ap["drifts"] == [1, 0, -1.5, -1.5]


def test_bound_error_is_a_value_error():
    with pytest.raises(rankbm.BoundError, match="a > 2"):
        rankbm.infinite_rates(rankbm.DriftSpec.inverted_atlas(), 1.0, 10)
    with pytest.raises(ValueError):
        rankbm.finite_stationary_rates(rankbm.DriftSpec.driftless(), 3)


def test_sample_gaps_is_seeded():
    a = rankbm.sample_gaps([3.0, 4.0, 5.0], 20000, seed=4)
    b = rankbm.sample_gaps([3.0, 4.0, 5.0], 20000, seed=4)
    assert a.shape == (20000, 3)
    assert np.array_equal(a, b)
    se = a.std(axis=0, ddof=1) / math.sqrt(a.shape[0])
    assert np.all(np.abs(a.mean(axis=0) - [1 / 3, 1 / 4, 1 / 5]) <= 3 * se)


def test_statistics():
    spec = rankbm.DriftSpec.atlas()
    gaps = rankbm.sample_gaps(rankbm.infinite_rates(spec, 1.0, 100000), 1, seed=1)[0]
    assert abs(rankbm.singularity_statistic(gaps, spec, 1.0) + 0.5772156649015329) < 0.02
    d, p = rankbm.ks_exponential(list(gaps[:10]), 3.0)
    assert 0.0 <= d <= 1.0 and 0.0 <= p <= 1.0
    assert rankbm.general_solution_residual(spec, 1.0, 100) <= 1e-12


def test_simulate_stationary():
    out = rankbm.simulate_stationary([1.0, 0.0], [1.0], dt=1e-2, trajectories=50, seed=3)
    assert out["names"] == ["gap_1", "displacement_1", "displacement_2"]
    assert out["values"].shape == (50, 3)


def test_verify_only(tmp_path):
    reports = rankbm.verify(ROOT / "configs" / "paper-suite.cfg", tmp_path, "rbm-residual")
    assert len(reports) == 1 and reports[0]["pass"]
    assert (tmp_path / "rbm-residual" / "verdict.json").exists()


def test_cli_rates():
    r = run_cli("rates", "--drift-spec", "atlas", "--a", "1", "--n", "4")
    assert r.returncode == 0 and r.stdout.strip() == "3,4,5,6"
    r = run_cli("rates", "--drift-spec", "atlas", "--N", "3")
    assert r.stdout.strip() == "1.3333333333333333,0.6666666666666666"
    r = run_cli("rates", "--drift-spec", "inverted-atlas", "--a", "1")
    assert r.returncode != 0 and "a > 2" in r.stderr
    r = run_cli("rates", "--drift-spec", '{"prefix": [1.0], "tail": 0.0}', "--a", "2", "--n", "3")
    assert r.stdout.strip() == "4,6,8"


def test_cli_sample(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for out in (a, b):
        r = run_cli("sample", "--drift-spec", "atlas", "--a", "1", "--n", "3", "--count", "100",
                    "--seed", "9", "--out", str(out))
        assert r.returncode == 0, r.stderr
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().splitlines()[0] == "gap_1,gap_2,gap_3"
    echo = json.loads((tmp_path / "a.csv.config-echo").read_text())
    assert echo["seed"] == 9 and echo["count"] == 100
    assert run_cli("sample", "--a", "1", "--count", "0").returncode == 2


def test_cli_sample_means(tmp_path):
    out = tmp_path / "s.csv"
    r = run_cli("sample", "--drift-spec", "atlas", "--a", "1", "--n", "3", "--count", "100000",
                "--seed", "5", "--out", str(out))
    assert r.returncode == 0
    data = np.loadtxt(out, delimiter=",", skiprows=1)
    se = data.std(axis=0, ddof=1) / math.sqrt(data.shape[0])
    assert np.all(np.abs(data.mean(axis=0) - [1 / 3, 1 / 4, 1 / 5]) <= 3 * se)


def test_cli_verify(tmp_path):
    r = run_cli("verify", "--config", str(ROOT / "configs" / "paper-suite.cfg"),
                "--out", str(tmp_path), "--only", "rbm-residual")
    assert r.returncode == 0, r.stdout + r.stderr
    assert sorted(p.name for p in tmp_path.iterdir()) == ["rbm-residual"]
    assert sorted(p.name for p in (tmp_path / "rbm-residual").iterdir()) == [
        "config-echo", "raw.csv", "verdict.json"]
    r = run_cli("verify", "--config", str(tmp_path / "missing.cfg"))
    assert r.returncode == 2 and "cannot read config file" in r.stderr
    bad = tmp_path / "bad.cfg"
    bad.write_text("experiments:\n  - name: x\n    kind: drift-identity\n    drift: atlas\n"
                   "    seed: 1\n    N: 1\n")
    r = run_cli("verify", "--config", str(bad))
    assert r.returncode == 2 and "N must be >= 2" in r.stderr
