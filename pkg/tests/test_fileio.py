import json

import numpy as np
import pytest

from supracentrality import (
    Eigenvector,
    LayerGraph,
    MultiplexNetwork,
    SupraOperator,
    SupraProblem,
    check_preconditions,
    dominant_eigenpair,
    log_grid,
    sweep,
    tableau_from_vector,
)
from supracentrality.fileio import (
    ParseError,
    ValidationError,
    load_interlayer,
    load_labels,
    load_multiplex,
    read_tableau_csv,
    write_summary_json,
    write_sweep_csv,
    write_tableau_csv,
)
from supracentrality.interlayer import all_to_all, chain_undirected

from _oracles import random_instance, random_layer


def test_load_symmetric_pair(tmp_path):
    path = tmp_path / "net.edges"
    path.write_text("# comment\n1 1 2 1.0\n1 2 1 1.0\n", encoding="utf-8")
    net = load_multiplex(path)
    assert net.n_nodes == 2 and net.n_layers == 1
    assert net.layers[0].entries == ((1, 2, 1.0), (2, 1, 1.0))


def test_load_default_weight(tmp_path):
    path = tmp_path / "net.edges"
    path.write_text("1 1 2\n", encoding="utf-8")
    net = load_multiplex(path)
    assert net.layers[0].entries == ((1, 2, 1.0),)


def test_load_duplicate_edge_rejected(tmp_path):
    path = tmp_path / "net.edges"
    path.write_text("1 1 2 1.0\n1 1 2 1.0\n", encoding="utf-8")
    with pytest.raises(ParseError) as err:
        load_multiplex(path)
    assert err.value.lineno == 2


def test_load_bad_field_reports_line(tmp_path):
    path = tmp_path / "net.edges"
    path.write_text("1 1 2 1.0\n1 x 2 1.0\n", encoding="utf-8")
    with pytest.raises(ParseError) as err:
        load_multiplex(path)
    assert err.value.lineno == 2


def test_load_validation_failure(tmp_path):
    path = tmp_path / "net.edges"
    path.write_text("1 1 2 -1.0\n", encoding="utf-8")
    with pytest.raises(ValidationError):
        load_multiplex(path)


def test_load_noncontiguous_layers_reindexed(tmp_path, caplog):
    path = tmp_path / "net.edges"
    path.write_text("1 1 2 1.0\n5 2 1 1.0\n", encoding="utf-8")
    with caplog.at_level("WARNING"):
        net = load_multiplex(path)
    assert net.n_layers == 2
    assert any("re-indexed" in rec.message for rec in caplog.records)


def test_load_nodes_override(tmp_path):
    path = tmp_path / "net.edges"
    path.write_text("1 1 2 1.0\n1 2 1 1.0\n", encoding="utf-8")
    net = load_multiplex(path, n_nodes=5)
    assert net.n_nodes == 5
    with pytest.raises(ValidationError):
        load_multiplex(path, n_nodes=1)


def test_load_labels(tmp_path):
    path = tmp_path / "labels.tsv"
    path.write_text("1\tParis CDG\n3\tZürich\n", encoding="utf-8")
    labels = load_labels(path, 3)
    assert labels == ("Paris CDG", "2", "Zürich")
    bad = tmp_path / "bad.tsv"
    bad.write_text("7\tX\n", encoding="utf-8")
    with pytest.raises(ParseError):
        load_labels(bad, 3)


def test_load_interlayer_triplets(tmp_path):
    path = tmp_path / "inter.tsv"
    path.write_text("1 2 1.0\n2 1 1.0\n", encoding="utf-8")
    m = load_interlayer(path, 2)
    assert np.array_equal(m.values, chain_undirected(2).values)
    dup = tmp_path / "dup.tsv"
    dup.write_text("1 2 1.0\n1 2 2.0\n", encoding="utf-8")
    with pytest.raises(ParseError):
        load_interlayer(dup, 2)


def test_network_roundtrip_via_files(tmp_path):
    rng = np.random.default_rng(31)
    for trial in range(5):
        n = int(rng.integers(2, 7))
        t = int(rng.integers(1, 4))
        layers = tuple(random_layer(rng, n, density=0.4) for _ in range(t))
        net = MultiplexNetwork(n, layers)
        path = tmp_path / f"net{trial}.edges"
        lines = []
        for lt, layer in enumerate(net.layers, start=1):
            for i, j, w in layer.entries:
                lines.append(f"{lt} {i} {j} {w!r}")
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        loaded = load_multiplex(path, n_nodes=n)
        assert loaded.n_nodes == net.n_nodes and loaded.n_layers == net.n_layers
        for a, b in zip(loaded.layers, net.layers):
            assert a.entries == b.entries


def _tiny_solution():
    net = MultiplexNetwork(
        2,
        (LayerGraph(2, ((1, 2, 1.0), (2, 1, 1.0))),) * 2,
        node_labels=("alpha, the first", "béta"),
        layer_labels=("ground", "étage"),
    )
    problem = SupraProblem(
        network=net, kind=Eigenvector(), interlayer=all_to_all(2), omega=0.5
    )
    op = SupraOperator(problem)
    pair = dominant_eigenpair(op)
    tab = tableau_from_vector(pair.vector, 2, 2, pair.eigenvalue, 0.5)
    return net, problem, pair, tab


def test_tableau_csv_roundtrip_with_unicode_labels(tmp_path):
    net, _, _, tab = _tiny_solution()
    path = tmp_path / "joint.csv"
    write_tableau_csv(tab, net, path)
    node_labels, layer_labels, w = read_tableau_csv(path)
    assert node_labels == ["alpha, the first", "béta"]
    assert layer_labels == ["ground", "étage"]
    assert np.array_equal(w, tab.W)  # 17 significant digits reparse exactly


def test_single_cell_tableau_has_two_lines(tmp_path):
    net = MultiplexNetwork(1, (LayerGraph(1, ((1, 1, 1.0),)),))
    problem = SupraProblem(
        network=net, kind=Eigenvector(), interlayer=all_to_all(1), omega=1.0
    )
    pair = dominant_eigenpair(SupraOperator(problem))
    tab = tableau_from_vector(pair.vector, 1, 1, pair.eigenvalue, 1.0)
    path = tmp_path / "one.csv"
    write_tableau_csv(tab, net, path)
    assert path.read_text(encoding="utf-8").count("\n") == 2


def test_summary_json_fields(tmp_path):
    net, problem, pair, tab = _tiny_solution()
    report = check_preconditions(problem)
    path = tmp_path / "summary.json"
    write_summary_json(path, tab, pair, report)
    payload = json.loads(path.read_text(encoding="utf-8"))
    assert list(payload) == [
        "omega",
        "lambda_max",
        "iterations",
        "residual",
        "mnc",
        "mlc",
        "preconditions",
    ]
    assert payload["omega"] == 0.5
    assert payload["lambda_max"] == pytest.approx(2.0, abs=1e-9)
    assert len(payload["mnc"]) == 2 and len(payload["mlc"]) == 2
    assert payload["preconditions"] == {"interlayer_ok": True, "layer_sum_ok": True}


def test_sweep_csv_shape(tmp_path):
    net, inter = random_instance(50, kind=Eigenvector())
    grid = log_grid(-2, 4, 0.2)
    result = sweep(net, Eigenvector(), inter, grid)
    path = tmp_path / "sweep.csv"
    write_sweep_csv(result, net, path)
    lines = path.read_text(encoding="utf-8").splitlines()
    assert len(lines) == 32  # header + 31 grid points
    header = lines[0].split(",")
    assert header[:4] == ["omega", "lambda_max", "w_sensitivity", "z_sensitivity"]
    assert len(header) == 4 + net.n_layers + net.n_nodes
    first = lines[1].split(",")
    assert first[2] == "nan" and first[3] == "nan"
    # every numeric field reparses
    for line in lines[1:]:
        [float(v) for v in line.split(",")]
