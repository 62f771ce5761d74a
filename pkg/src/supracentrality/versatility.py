"""PageRank versatility: a per-node baseline built from the raw supra-adjacency.

Unlike the coupled centrality pipeline, which places per-layer *centrality*
matrices on the block diagonal, versatility treats the whole block matrix
diag(A_1, ..., A_T) + omega * (interlayer x I) as one big ordinary adjacency
matrix, builds its PageRank matrix, and sums the dominant eigenvector's
entries per node.
"""
from __future__ import annotations

import numpy as np
from scipy import sparse

from .engine import shifted_power_iteration
from .types import DanglingPolicy, InterlayerMatrix, MultiplexNetwork

__all__ = ["pagerank_versatility"]


def pagerank_versatility(
    net: MultiplexNetwork,
    interlayer: InterlayerMatrix,
    omega: float,
    sigma: float = 0.85,
    *,
    dangling: DanglingPolicy = DanglingPolicy.DANGLING_ONLY,
    tol: float = 1e-12,
    max_iter: int = 100_000,
) -> np.ndarray:
    """Per-node PageRank versatility (length N, sums to 1).

    The supra-adjacency matrix gets the dangling policy applied at the
    node-layer level, is turned into the column-stochastic PageRank matrix
    with teleportation ``sigma``, and its dominant eigenvector (normalized
    to unit 1-norm, so it is a probability over node-layer pairs) is summed
    across each node's layer copies.  Rankings are invariant to the
    normalization choice; magnitudes are on the 1-norm scale.
    """
    if not 0.0 <= sigma < 1.0:
        raise ValueError(f"sigma must lie in [0, 1), got {sigma}")
    if omega < 0:
        raise ValueError(f"omega must be nonnegative, got {omega}")
    if interlayer.dim != net.n_layers:
        raise ValueError(
            f"interlayer matrix is {interlayer.dim}x{interlayer.dim} "
            f"but the network has {net.n_layers} layers"
        )
    n, t = net.n_nodes, net.n_layers
    dim = n * t
    supra = sparse.block_diag([g.csr for g in net.layers], format="csr")
    if omega:
        supra = (supra + omega * sparse.kron(interlayer.values, sparse.identity(n))).tocsr()
    row_sums = np.asarray(supra.sum(axis=1)).ravel()
    if dangling is DanglingPolicy.ALL_NODES:
        supra = (supra + sparse.identity(dim, format="csr")).tocsr()
        row_sums = row_sums + 1.0
    else:
        mask = (row_sums == 0).astype(float)
        if mask.any():
            supra = (supra + sparse.diags(mask)).tocsr()
            row_sums = row_sums + mask

    supra_t = supra.T.tocsr()
    inv_d = 1.0 / row_sums
    teleport = (1.0 - sigma) / dim

    def matvec(x: np.ndarray) -> np.ndarray:
        return sigma * (supra_t @ (x * inv_d)) + teleport * float(x.sum())

    pair = shifted_power_iteration(matvec, dim, shift=0.0, tol=tol, max_iter=max_iter)
    vec = pair.vector
    total = float(vec.sum())
    if total <= 0:
        raise RuntimeError("supra PageRank vector has no positive mass")
    vec = vec / total
    return vec.reshape(t, n).sum(axis=0)
