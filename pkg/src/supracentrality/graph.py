"""Structural checks and degree statistics.

Strong connectivity doubles as the irreducibility test for nonnegative
matrices (the two are equivalent), which is what the uniqueness
preconditions of the coupled eigenproblem require: the interlayer matrix
must be strongly connected and the entrywise sum of the layer centrality
matrices must be irreducible.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .centrality import LayerCentralityMatrix, build_centrality_matrix
from .types import LayerGraph, MultiplexNetwork, SupraProblem

__all__ = [
    "ConstantInputError",
    "PreconditionReport",
    "strongly_connected",
    "check_preconditions",
    "intralayer_degrees",
    "total_degrees",
    "k_path_counts",
    "aggregate_layers",
    "pearson",
]


class ConstantInputError(ValueError):
    """Raised when a correlation input has zero variance."""


def _adjacency_bool(matrix) -> np.ndarray:
    if sparse.issparse(matrix):
        if matrix.shape[0] != matrix.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {matrix.shape}")
        return (matrix > 0).toarray()
    arr = np.asarray(matrix)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {arr.shape}")
    return arr > 0


def _reaches_all(adj: np.ndarray) -> bool:
    # breadth-first reachability from node 0 using boolean row masks
    n = adj.shape[0]
    visited = np.zeros(n, dtype=bool)
    visited[0] = True
    frontier = visited.copy()
    while frontier.any():
        nxt = adj[frontier].any(axis=0) & ~visited
        visited |= nxt
        frontier = nxt
    return bool(visited.all())


def strongly_connected(matrix) -> bool:
    """True iff the digraph with an edge wherever the entry is > 0 is strongly connected.

    Accepts a dense array or a scipy sparse matrix.  A 1x1 (or empty) matrix
    counts as strongly connected.  Linear-time check: every node must be
    reachable from node 1 and must reach node 1.
    """
    adj = _adjacency_bool(matrix)
    n = adj.shape[0]
    if n <= 1:
        return True
    return _reaches_all(adj) and _reaches_all(adj.T)


@dataclass(frozen=True)
class PreconditionReport:
    """Outcome of the uniqueness precondition checks for a coupled problem."""

    interlayer_ok: bool
    layer_sum_ok: bool

    @property
    def both_ok(self) -> bool:
        return self.interlayer_ok and self.layer_sum_ok


def check_preconditions(
    problem: SupraProblem,
    layer_matrices: tuple[LayerCentralityMatrix, ...] | None = None,
) -> PreconditionReport:
    """Check that the interlayer matrix is strongly connected and the summed
    layer centrality matrices are irreducible.

    Report-style: callers decide whether to refuse.  When both flags hold,
    the coupled operator has a unique positive dominant eigenvector for
    every omega > 0.
    """
    if layer_matrices is None:
        layer_matrices = tuple(
            build_centrality_matrix(layer, problem.kind) for layer in problem.network.layers
        )
    interlayer_ok = strongly_connected(problem.interlayer.values)

    teleported = [m for m in layer_matrices if m.teleport_coeff > 0]
    if teleported and all(m.teleport.min() > 0 for m in teleported):
        # some layer contributes a strictly positive rank-one term
        layer_sum_ok = True
    else:
        total = sum(m.sparse for m in layer_matrices)
        if teleported:
            dense = total.toarray()
            for m in teleported:
                dense = dense + m.teleport_coeff * np.outer(m.teleport, np.ones(m.n))
            layer_sum_ok = strongly_connected(dense)
        else:
            layer_sum_ok = strongly_connected(total)
    return PreconditionReport(interlayer_ok=interlayer_ok, layer_sum_ok=layer_sum_ok)


def intralayer_degrees(net: MultiplexNetwork) -> np.ndarray:
    """Out-degree (row sum) of every node in every layer, as an N x T matrix."""
    cols = [np.asarray(layer.csr.sum(axis=1)).ravel() for layer in net.layers]
    return np.column_stack(cols)


def total_degrees(net: MultiplexNetwork) -> np.ndarray:
    """Per-node degree summed across all layers (length N)."""
    return intralayer_degrees(net).sum(axis=1)


def k_path_counts(graph: LayerGraph, k: int) -> np.ndarray:
    """Number of length-k paths leaving each node, computed as A^k applied to
    the all-ones vector by k sparse products (A^k is never formed)."""
    if k < 0:
        raise ValueError(f"k must be nonnegative, got {k}")
    x = np.ones(graph.n_nodes)
    a = graph.csr
    for _ in range(k):
        x = a @ x
    return x


def aggregate_layers(net: MultiplexNetwork) -> LayerGraph:
    """Entrywise sum of all layer adjacency matrices, as a single layer."""
    acc: dict[tuple[int, int], float] = {}
    for layer in net.layers:
        for i, j, w in layer.entries:
            acc[(i, j)] = acc.get((i, j), 0.0) + w
    entries = tuple((i, j, w) for (i, j), w in sorted(acc.items()))
    return LayerGraph(n_nodes=net.n_nodes, entries=entries)


def pearson(x, y) -> float:
    """Sample Pearson correlation coefficient.

    Raises ConstantInputError when either input has zero variance (the
    coefficient is undefined there).
    """
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    if xa.shape != ya.shape or xa.ndim != 1:
        raise ValueError("inputs must be 1-D with equal length")
    if xa.size < 2:
        raise ValueError("need at least two samples")
    xc = xa - xa.mean()
    yc = ya - ya.mean()
    sx = float(xc @ xc)
    sy = float(yc @ yc)
    if sx == 0.0 or sy == 0.0:
        raise ConstantInputError("correlation undefined for constant input")
    return float((xc @ yc) / np.sqrt(sx * sy))
