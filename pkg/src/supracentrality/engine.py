"""Matrix-free coupled operator and its dominant eigenpair.

The coupled operator on length-N*T vectors is

    block t of (C x) = C_t @ x_t + omega * sum_t' interlayer[t, t'] * x_t'

i.e. the block matrix with the layer centrality matrices on the diagonal and
omega-scaled identity couplings off the diagonal.  It is applied blockwise
and never materialized.  Vectors are ordered node-major within layer: entry
N*(t-1) + i holds node i of layer t (both 1-based).

Power iteration runs on the shifted operator C + c*I.  Any c > 0 makes the
spectrum aperiodic (bipartite-like layers would otherwise cycle) without
changing eigenvectors; the reported eigenvalue has the shift removed.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np
from scipy import sparse

from .centrality import LayerCentralityMatrix, build_centrality_matrix
from .types import CentralityTableau, SupraProblem

__all__ = [
    "NonConvergenceError",
    "EigenpairResult",
    "SupraOperator",
    "shifted_power_iteration",
    "dominant_eigenpair",
    "tableau_from_vector",
    "stride_permutation",
]


class NonConvergenceError(RuntimeError):
    """Power iteration did not meet its tolerance within the iteration budget.

    Typical causes: a periodic operator iterated without a shift, a
    near-degenerate dominant eigenvalue pair, or a tolerance that is too
    tight for the spectral gap.
    """

    def __init__(self, iterations: int, residual: float, context: str = ""):
        self.iterations = iterations
        self.residual = residual
        self.context = context
        detail = f" ({context})" if context else ""
        super().__init__(
            f"no convergence after {iterations} iterations, residual {residual:.3e}{detail}"
        )


@dataclass(frozen=True, eq=False)
class EigenpairResult:
    """Converged dominant eigenpair: unit-norm vector, eigenvalue, and diagnostics."""

    eigenvalue: float
    vector: np.ndarray
    iterations: int
    residual: float


def _fix_sign(x: np.ndarray, tol: float) -> np.ndarray:
    out = np.array(x)
    peak = int(np.argmax(np.abs(out)))
    if out[peak] < 0:
        out = -out
    out[(out > -tol) & (out < 0)] = 0.0
    nrm = float(np.linalg.norm(out))
    if nrm > 0:
        out /= nrm
    return out


def shifted_power_iteration(
    matvec: Callable[[np.ndarray], np.ndarray],
    dim: int,
    *,
    shift: float = 0.0,
    tol: float = 1e-10,
    max_iter: int = 100_000,
    start: np.ndarray | None = None,
) -> EigenpairResult:
    """Dominant eigenpair of the operator behind ``matvec`` by power iteration.

    Iterates x -> matvec(x) + shift*x from the (positive) all-ones direction
    unless ``start`` is given.  Converged when the residual and the change in
    the Rayleigh quotient both fall below tol relative to the eigenvalue;
    the reported eigenvalue has the shift subtracted.  After convergence the
    vector's sign is fixed so its largest-magnitude entry is positive and
    entries in (-tol, 0) are clamped to 0.

    Raises NonConvergenceError after ``max_iter`` iterations.
    """
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if max_iter < 1:
        raise ValueError(f"max_iter must be at least 1, got {max_iter}")
    if start is None:
        x = np.full(dim, 1.0 / np.sqrt(dim))
    else:
        x = np.array(start, dtype=float)
        if x.shape != (dim,):
            raise ValueError(f"start vector must have length {dim}")
        nrm = float(np.linalg.norm(x))
        if nrm == 0:
            raise ValueError("start vector must be nonzero")
        x /= nrm

    lam_prev = None
    residual = np.inf
    for iteration in range(1, max_iter + 1):
        y = matvec(x)
        if shift:
            y = y + shift * x
        lam_shifted = float(x @ y)
        residual = float(np.linalg.norm(y - lam_shifted * x))
        lam = lam_shifted - shift
        scale = max(abs(lam), 1e-300)
        if (
            lam_prev is not None
            and residual <= tol * scale
            and abs(lam_shifted - lam_prev) <= tol * scale
        ):
            return EigenpairResult(
                eigenvalue=lam,
                vector=_fix_sign(x, tol),
                iterations=iteration,
                residual=residual,
            )
        norm_y = float(np.linalg.norm(y))
        if norm_y == 0:
            raise NonConvergenceError(iteration, residual, "iterate collapsed to zero")
        x = y / norm_y
        lam_prev = lam_shifted
    raise NonConvergenceError(max_iter, residual)


class SupraOperator:
    """The coupled operator for one problem, applied blockwise.

    ``shift`` defaults to 0.1 * (1 + max row sum over the diagonal layer
    blocks), which keeps the shifted spectrum comfortably aperiodic without
    hurting the convergence rate; pass shift=0.0 to work with the raw
    operator.  ``apply``/``apply_transpose`` include the shift term, matching
    what the eigensolver iterates.
    """

    def __init__(
        self,
        problem: SupraProblem,
        layer_matrices: tuple[LayerCentralityMatrix, ...] | None = None,
        shift: float | None = None,
    ):
        self.problem = problem
        if layer_matrices is None:
            layer_matrices = tuple(
                build_centrality_matrix(layer, problem.kind)
                for layer in problem.network.layers
            )
        if len(layer_matrices) != problem.network.n_layers:
            raise ValueError("one layer matrix per layer is required")
        self.layers = tuple(layer_matrices)
        self.interlayer = problem.interlayer.values
        self.omega = problem.omega
        if shift is None:
            shift = 0.1 * (1.0 + max(m.max_row_sum() for m in self.layers))
        if shift < 0:
            raise ValueError(f"shift must be nonnegative, got {shift}")
        self.shift = float(shift)

        # one block-diagonal sparse matrix for all layers keeps apply() at a
        # single matvec instead of a Python loop over layers
        self._block_diag = sparse.block_diag(
            [m.sparse for m in self.layers], format="csr"
        )
        self._block_diag_t = self._block_diag.T.tocsr()
        n = self.n_nodes
        self._tele_coeffs = np.array([m.teleport_coeff for m in self.layers])
        self._has_teleport = bool(np.any(self._tele_coeffs > 0))
        if self._has_teleport:
            self._tele_vectors = np.vstack(
                [
                    m.teleport if m.teleport is not None else np.zeros(n)
                    for m in self.layers
                ]
            )
        else:
            self._tele_vectors = None

    @property
    def n_nodes(self) -> int:
        return self.problem.network.n_nodes

    @property
    def n_layers(self) -> int:
        return self.problem.network.n_layers

    @property
    def dim(self) -> int:
        return self.n_nodes * self.n_layers

    def _blocks(self, x: np.ndarray) -> np.ndarray:
        if x.shape != (self.dim,):
            raise ValueError(f"expected a vector of length {self.dim}, got {x.shape}")
        return x.reshape(self.n_layers, self.n_nodes)

    def _apply_base(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        blocks = self._blocks(x)
        out = (self._block_diag @ x).reshape(blocks.shape)
        if self._has_teleport:
            out += (self._tele_coeffs * blocks.sum(axis=1))[:, None] * self._tele_vectors
        if self.omega:
            out += self.omega * (self.interlayer @ blocks)
        return out.ravel()

    def _apply_base_transpose(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        blocks = self._blocks(x)
        out = (self._block_diag_t @ x).reshape(blocks.shape)
        if self._has_teleport:
            dots = np.einsum("tn,tn->t", self._tele_vectors, blocks)
            out += (self._tele_coeffs * dots)[:, None]
        if self.omega:
            out += self.omega * (self.interlayer.T @ blocks)
        return out.ravel()

    def apply(self, x: np.ndarray) -> np.ndarray:
        """Blockwise product: C_t x_t + omega * sum_t' A~[t,t'] x_t' + shift * x_t."""
        y = self._apply_base(x)
        if self.shift:
            y = y + self.shift * np.asarray(x, dtype=float)
        return y

    def apply_transpose(self, x: np.ndarray) -> np.ndarray:
        y = self._apply_base_transpose(x)
        if self.shift:
            y = y + self.shift * np.asarray(x, dtype=float)
        return y

    def to_dense(self, include_shift: bool = True) -> np.ndarray:
        """Materialize the operator (tests and small problems only)."""
        n, t = self.n_nodes, self.n_layers
        dense = np.zeros((n * t, n * t))
        for tt, mat in enumerate(self.layers):
            dense[tt * n : (tt + 1) * n, tt * n : (tt + 1) * n] = mat.to_dense()
        if self.omega:
            dense += self.omega * np.kron(self.interlayer, np.eye(n))
        if include_shift and self.shift:
            dense += self.shift * np.eye(n * t)
        return dense


def dominant_eigenpair(
    op: SupraOperator,
    side: Literal["right", "left"] = "right",
    *,
    tol: float = 1e-10,
    max_iter: int = 100_000,
    start: np.ndarray | None = None,
) -> EigenpairResult:
    """Dominant right or left eigenpair of the coupled operator.

    Runs the shifted power iteration on ``op`` (or its transpose for the
    left pair); the reported eigenvalue has the operator's shift removed.
    Warm starts: pass the previous solution as ``start`` when sweeping over
    coupling strengths.
    """
    if side not in ("right", "left"):
        raise ValueError(f"side must be 'right' or 'left', got {side!r}")
    matvec = op._apply_base if side == "right" else op._apply_base_transpose
    return shifted_power_iteration(
        matvec,
        op.dim,
        shift=op.shift,
        tol=tol,
        max_iter=max_iter,
        start=start,
    )


def tableau_from_vector(
    vector: np.ndarray,
    n_nodes: int,
    n_layers: int,
    lambda_max: float,
    omega: float,
) -> CentralityTableau:
    """Reshape a unit nonnegative eigenvector into the centrality tableau.

    Entry N*(t-1)+i of the vector becomes W[i-1, t-1]; marginals are the
    row/column sums and conditionals divide by them.  Layers or nodes with
    zero marginal mass get NaN conditionals and are flagged on the tableau.
    """
    v = np.asarray(vector, dtype=float)
    if v.shape != (n_nodes * n_layers,):
        raise ValueError(f"expected a vector of length {n_nodes * n_layers}, got {v.shape}")
    if float(v.min(initial=0.0)) < -1e-9:
        raise ValueError("eigenvector has materially negative entries")
    v = np.where(v < 0, 0.0, v)
    nrm = float(np.linalg.norm(v))
    if nrm == 0:
        raise ValueError("eigenvector is zero")
    v = v / nrm

    W = v.reshape(n_layers, n_nodes).T.copy()
    x = W.sum(axis=0)
    x_hat = W.sum(axis=1)
    zero_layers = tuple(int(t + 1) for t in np.flatnonzero(x == 0))
    zero_nodes = tuple(int(i + 1) for i in np.flatnonzero(x_hat == 0))
    with np.errstate(divide="ignore", invalid="ignore"):
        Z = W / x[np.newaxis, :]
        Z_hat = W / x_hat[:, np.newaxis]
    for t in np.flatnonzero(x == 0):
        Z[:, t] = np.nan
    for i in np.flatnonzero(x_hat == 0):
        Z_hat[i, :] = np.nan

    tableau = CentralityTableau(
        W=W,
        x=x,
        x_hat=x_hat,
        Z=Z,
        Z_hat=Z_hat,
        lambda_max=float(lambda_max),
        omega=float(omega),
        zero_mass_layers=zero_layers,
        zero_mass_nodes=zero_nodes,
    )
    tableau.validate()
    return tableau


def stride_permutation(n_nodes: int, n_layers: int) -> np.ndarray:
    """Index map of the permutation between node-major and layer-major order.

    Returns a 0-based array ``perm`` with (P x)[k] = x[perm[k]]; in 1-based
    terms the permutation matrix has its k-th row's 1 in column
    ceil(k / N) + T * ((k - 1) mod N).  Conjugating the layer-major coupling
    block I (x) A~ with P yields the node-major block A~ (x) I.
    """
    if n_nodes < 1 or n_layers < 1:
        raise ValueError("need at least one node and one layer")
    k = np.arange(1, n_nodes * n_layers + 1, dtype=np.int64)
    l = (k + n_nodes - 1) // n_nodes + n_layers * ((k - 1) % n_nodes)
    return l - 1
