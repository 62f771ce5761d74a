import json
import math

import numpy as np
import pytest

from supracentrality.cli import dispatch

from _oracles import random_layer


@pytest.fixture
def two_cycle_net(tmp_path):
    path = tmp_path / "net.edges"
    lines = []
    for t in (1, 2):
        lines += [f"{t} 1 2 1.0", f"{t} 2 1 1.0"]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture
def six_layer_net(tmp_path):
    rng = np.random.default_rng(0)
    path = tmp_path / "net6.edges"
    lines = []
    for t in range(1, 7):
        layer = random_layer(rng, 4, density=0.55, with_cycle=True)
        for i, j, w in layer.entries:
            lines.append(f"{t} {i} {j} {w!r}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def test_check_passes_and_fails(two_cycle_net):
    ok = dispatch(
        ["check", "--network", str(two_cycle_net), "--kind", "eigenvector",
         "--interlayer", "alltoall"]
    )
    assert ok == 0
    bad = dispatch(
        ["check", "--network", str(two_cycle_net), "--kind", "eigenvector",
         "--interlayer", "teleport:0"]
    )
    assert bad == 2


def test_usage_errors(two_cycle_net, tmp_path):
    out = tmp_path / "x.csv"
    assert dispatch([]) == 1
    assert dispatch(["centrality", "--network", str(two_cycle_net)]) == 1
    code = dispatch(
        ["centrality", "--network", str(two_cycle_net), "--kind", "pagerank",
         "--sigma", "1.0", "--interlayer", "alltoall", "--omega", "1",
         "--out", str(out)]
    )
    assert code == 1
    code = dispatch(
        ["centrality", "--network", str(two_cycle_net), "--kind", "eigenvector",
         "--interlayer", "nonsense", "--omega", "1", "--out", str(out)]
    )
    assert code == 1


def test_validation_exit_code(tmp_path):
    bad = tmp_path / "bad.edges"
    bad.write_text("1 1 2 1.0\n1 1 2 1.0\n", encoding="utf-8")
    code = dispatch(
        ["check", "--network", str(bad), "--kind", "eigenvector",
         "--interlayer", "alltoall"]
    )
    assert code == 2


def test_nonconvergence_exit_code(two_cycle_net, tmp_path):
    out = tmp_path / "joint.csv"
    code = dispatch(
        ["centrality", "--network", str(two_cycle_net), "--kind", "eigenvector",
         "--interlayer", "alltoall", "--omega", "1", "--max-iter", "1",
         "--out", str(out)]
    )
    assert code == 3


def test_centrality_outputs_and_determinism(two_cycle_net, tmp_path):
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    summary = tmp_path / "s.json"
    argv = [
        "centrality", "--network", str(two_cycle_net), "--kind", "eigenvector",
        "--interlayer", "alltoall", "--omega", "0.5", "--summary", str(summary),
    ]
    assert dispatch(argv + ["--out", str(out1)]) == 0
    assert dispatch(argv + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    payload = json.loads(summary.read_text(encoding="utf-8"))
    assert payload["omega"] == 0.5
    assert payload["preconditions"]["interlayer_ok"] is True


def test_interlayer_file_spec(two_cycle_net, tmp_path):
    inter = tmp_path / "inter.tsv"
    inter.write_text("1 2 1.0\n2 1 1.0\n", encoding="utf-8")
    out = tmp_path / "joint.csv"
    code = dispatch(
        ["centrality", "--network", str(two_cycle_net), "--kind", "eigenvector",
         "--interlayer", f"file:{inter}", "--omega", "1", "--out", str(out)]
    )
    assert code == 0


def test_sweep_csv_and_regime_report(six_layer_net, tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    code = dispatch(
        ["sweep", "--network", str(six_layer_net), "--kind", "eigenvector",
         "--interlayer", "blocks:sizes=3,3;intra=1;inter=0.01",
         "--grid", "-2,4,0.2", "--tol", "1e-8", "--out", str(out)]
    )
    assert code == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    assert len(lines) == 32
    printed = capsys.readouterr().out
    assert "regimes" in printed


def test_limit_strong_chain_reports_mu1(six_layer_net, tmp_path):
    out = tmp_path / "limit.json"
    code = dispatch(
        ["limit", "--which", "strong", "--network", str(six_layer_net),
         "--kind", "eigenvector", "--interlayer", "chain", "--out", str(out)]
    )
    assert code == 0
    payload = json.loads(out.read_text(encoding="utf-8"))
    assert payload["mu1"] == pytest.approx(2 * math.cos(math.pi / 7), abs=1e-9)
    assert payload["mu1"] == pytest.approx(1.8019377, abs=1e-6)
    assert payload["corollary_check"]["shape"] == "chain"
    assert payload["corollary_check"]["mu1_discrepancy"] <= 1e-10


def test_limit_weak_json(six_layer_net, tmp_path):
    out = tmp_path / "weak.json"
    code = dispatch(
        ["limit", "--which", "weak", "--network", str(six_layer_net),
         "--kind", "pagerank", "--interlayer", "alltoall", "--out", str(out)]
    )
    assert code == 0
    payload = json.loads(out.read_text(encoding="utf-8"))
    assert payload["dominating_set"] == [1, 2, 3, 4, 5, 6]
    assert len(payload["alpha"]) == 6


def test_correlate_and_trajectory(six_layer_net, tmp_path):
    corr = tmp_path / "corr.csv"
    code = dispatch(
        ["correlate", "--network", str(six_layer_net), "--kind", "eigenvector",
         "--interlayer", "alltoall", "--grid", "-1,1,0.5", "--out", str(corr)]
    )
    assert code == 0
    lines = corr.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "omega,r_intralayer,r_total,r_reference"
    assert len(lines) == 6

    traj = tmp_path / "traj.csv"
    code = dispatch(
        ["trajectory", "--node", "2", "--network", str(six_layer_net),
         "--kind", "eigenvector", "--interlayer", "alltoall",
         "--grid", "-1,1,0.5", "--out", str(traj)]
    )
    assert code == 0
    lines = traj.read_text(encoding="utf-8").splitlines()
    assert len(lines) == 6
    ranks = [int(v) for v in lines[1].split(",")[1:]]
    assert all(1 <= r <= 4 for r in ranks)


def test_versatility_output(six_layer_net, tmp_path):
    out = tmp_path / "vers.csv"
    code = dispatch(
        ["versatility", "--network", str(six_layer_net), "--interlayer", "alltoall",
         "--omega", "1.0", "--out", str(out)]
    )
    assert code == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "node,versatility"
    values = [float(line.split(",")[1]) for line in lines[1:]]
    assert len(values) == 4
    assert sum(values) == pytest.approx(1.0, abs=1e-9)


def test_help_exits_zero():
    assert dispatch(["--help"]) == 0
    assert dispatch(["centrality", "--help"]) == 0


def test_sweep_output_is_byte_identical(six_layer_net, tmp_path):
    out1, out2 = tmp_path / "s1.csv", tmp_path / "s2.csv"
    argv = [
        "sweep", "--network", str(six_layer_net), "--kind", "eigenvector",
        "--interlayer", "chain", "--grid", "-1,1,0.5",
    ]
    assert dispatch(argv + ["--out", str(out1)]) == 0
    assert dispatch(argv + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
