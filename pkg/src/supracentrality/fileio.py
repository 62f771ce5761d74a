"""File ingestion and result emission.

Edge lists are whitespace-separated text with 1-based indices:

    layer node_i node_j [weight]      # weight defaults to 1.0

Full-line comments start with '#'.  Layer indices need not be contiguous;
they are densely re-indexed in sorted order and the mapping is logged.
Interlayer triplet files use columns ``t t_prime weight`` with the same
conventions.  Label files are ``index<TAB>label`` lines.  Numeric output is
written with 17 significant digits so every value re-parses exactly.
"""
from __future__ import annotations

import csv
import json
import logging

import numpy as np

from .engine import EigenpairResult
from .graph import PreconditionReport
from .interlayer import from_triplets
from .sweeps import SweepResult
from .types import CentralityTableau, InterlayerMatrix, LayerGraph, MultiplexNetwork, validate_network

__all__ = [
    "ParseError",
    "ValidationError",
    "load_multiplex",
    "load_labels",
    "load_interlayer",
    "write_tableau_csv",
    "read_tableau_csv",
    "write_summary_json",
    "write_sweep_csv",
]

log = logging.getLogger(__name__)


class ParseError(ValueError):
    """A file could not be parsed; carries the offending line number."""

    def __init__(self, path, lineno: int, message: str):
        self.path = str(path)
        self.lineno = lineno
        super().__init__(f"{path}:{lineno}: {message}")


class ValidationError(ValueError):
    """A parsed network violates structural invariants."""

    def __init__(self, violations: list[str]):
        self.violations = list(violations)
        super().__init__("invalid network:\n  " + "\n  ".join(self.violations))


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def _data_lines(path):
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            yield lineno, line


def load_labels(path, count: int) -> tuple[str, ...]:
    """Read ``index<TAB>label`` lines; unlisted indices keep their number."""
    labels = [str(i) for i in range(1, count + 1)]
    for lineno, line in _data_lines(path):
        idx_str, sep, label = line.partition("\t")
        if not sep:
            raise ParseError(path, lineno, "expected 'index<TAB>label'")
        try:
            idx = int(idx_str)
        except ValueError:
            raise ParseError(path, lineno, f"bad index {idx_str!r}") from None
        if not 1 <= idx <= count:
            raise ParseError(path, lineno, f"index {idx} out of range 1..{count}")
        labels[idx - 1] = label
    return tuple(labels)


def load_multiplex(
    path,
    *,
    node_labels_path=None,
    layer_labels_path=None,
    n_nodes: int | None = None,
) -> MultiplexNetwork:
    """Parse a multiplex edge-list file into a validated network.

    The node count is the largest node index seen unless ``n_nodes``
    overrides it.  Duplicate (layer, i, j) lines and structural violations
    raise; the layer re-index mapping is logged when layers are not already
    1..T.
    """
    edges: dict[int, list[tuple[int, int, float]]] = {}
    seen: dict[tuple[int, int, int], int] = {}
    max_node = 0
    for lineno, line in _data_lines(path):
        parts = line.split()
        if len(parts) not in (3, 4):
            raise ParseError(path, lineno, f"expected 3 or 4 columns, got {len(parts)}")
        try:
            layer = int(parts[0])
            i = int(parts[1])
            j = int(parts[2])
        except ValueError:
            raise ParseError(path, lineno, f"bad integer field in {line!r}") from None
        weight = 1.0
        if len(parts) == 4:
            try:
                weight = float(parts[3])
            except ValueError:
                raise ParseError(path, lineno, f"bad weight {parts[3]!r}") from None
        if layer < 1 or i < 1 or j < 1:
            raise ParseError(path, lineno, "indices must be 1-based positive integers")
        key = (layer, i, j)
        if key in seen:
            raise ParseError(
                path, lineno, f"duplicate edge {key} (first seen on line {seen[key]})"
            )
        seen[key] = lineno
        edges.setdefault(layer, []).append((i, j, weight))
        max_node = max(max_node, i, j)

    if not edges:
        raise ParseError(path, 0, "file contains no edges")
    layer_ids = sorted(edges)
    if layer_ids != list(range(1, len(layer_ids) + 1)):
        mapping = {old: new for new, old in enumerate(layer_ids, start=1)}
        log.warning("re-indexed non-contiguous layers: %s", mapping)
    count = n_nodes if n_nodes is not None else max_node

    node_labels = load_labels(node_labels_path, count) if node_labels_path else None
    layer_labels = (
        load_labels(layer_labels_path, len(layer_ids)) if layer_labels_path else None
    )
    net = MultiplexNetwork(
        n_nodes=count,
        layers=tuple(LayerGraph(count, tuple(edges[t])) for t in layer_ids),
        node_labels=node_labels,
        layer_labels=layer_labels,
    )
    violations = validate_network(net)
    if violations:
        raise ValidationError(violations)
    return net


def load_interlayer(path, n_layers: int) -> InterlayerMatrix:
    """Parse a ``t t_prime weight`` triplet file into an interlayer matrix."""
    triplets = []
    for lineno, line in _data_lines(path):
        parts = line.split()
        if len(parts) != 3:
            raise ParseError(path, lineno, f"expected 3 columns, got {len(parts)}")
        try:
            triplets.append((int(parts[0]), int(parts[1]), float(parts[2])))
        except ValueError:
            raise ParseError(path, lineno, f"bad field in {line!r}") from None
    try:
        return from_triplets(n_layers, triplets)
    except ValueError as err:
        raise ParseError(path, 0, str(err)) from err


def write_tableau_csv(tableau: CentralityTableau, net: MultiplexNetwork, path) -> None:
    """Joint-centrality CSV: header ``node,<layer labels>``, one row per node."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["node"] + [net.layer_label(t) for t in range(1, net.n_layers + 1)])
        for i in range(1, net.n_nodes + 1):
            writer.writerow(
                [net.node_label(i)] + [_fmt(v) for v in tableau.W[i - 1, :]]
            )


def read_tableau_csv(path) -> tuple[list[str], list[str], np.ndarray]:
    """Inverse of :func:`write_tableau_csv`: (node labels, layer labels, W)."""
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        layer_labels = header[1:]
        node_labels = []
        rows = []
        for row in reader:
            node_labels.append(row[0])
            rows.append([float(v) for v in row[1:]])
    return node_labels, layer_labels, np.array(rows)


def write_summary_json(
    path,
    tableau: CentralityTableau,
    eigenpair: EigenpairResult,
    preconditions: PreconditionReport,
) -> None:
    """Run summary with the fixed field set used by downstream tooling."""
    payload = {
        "omega": tableau.omega,
        "lambda_max": tableau.lambda_max,
        "iterations": eigenpair.iterations,
        "residual": eigenpair.residual,
        "mnc": [float(v) for v in tableau.mnc],
        "mlc": [float(v) for v in tableau.mlc],
        "preconditions": {
            "interlayer_ok": preconditions.interlayer_ok,
            "layer_sum_ok": preconditions.layer_sum_ok,
        },
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def write_sweep_csv(result: SweepResult, net: MultiplexNetwork, path) -> None:
    """One row per coupling strength: omega, eigenvalue, both sensitivities,
    then the T marginal layer centralities and N marginal node centralities.

    The first row's sensitivities (no previous point) and any failed points
    are written as nan.
    """
    header = ["omega", "lambda_max", "w_sensitivity", "z_sensitivity"]
    header += [f"mlc_{net.layer_label(t)}" for t in range(1, net.n_layers + 1)]
    header += [f"mnc_{net.node_label(i)}" for i in range(1, net.n_nodes + 1)]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for s, omega in enumerate(result.grid.values):
            tab = result.tableaus[s]
            w_s = result.w_sensitivity[s - 1] if s >= 1 else float("nan")
            z_s = result.z_sensitivity[s - 1] if s >= 1 else float("nan")
            row = [_fmt(omega)]
            if tab is None:
                nan = float("nan")
                row += [_fmt(nan), _fmt(w_s), _fmt(z_s)]
                row += [_fmt(nan)] * (net.n_layers + net.n_nodes)
            else:
                row += [_fmt(tab.lambda_max), _fmt(w_s), _fmt(z_s)]
                row += [_fmt(v) for v in tab.mlc]
                row += [_fmt(v) for v in tab.mnc]
            writer.writerow(row)
