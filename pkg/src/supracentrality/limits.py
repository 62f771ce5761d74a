"""Closed-form weak- and strong-coupling limits of the coupled eigenproblem.

As the coupling strength tends to 0+ the layers decouple: the dominant
eigenvector concentrates on the set of layers whose centrality matrices
share the largest spectral radius, mixed by the dominant eigenpair of a
small auxiliary matrix X built from the interlayer weights and the layers'
left/right eigenvectors.  As the coupling tends to infinity the layers
aggregate: the eigenvector becomes separable, node weights solving the
dominant eigenproblem of an aggregate matrix that averages the layer
matrices with weights from the interlayer matrix's own dominant eigenpair.

Both solvers are independent of the iterative engine's path through the
full coupled operator, so they double as cross-checks for it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .centrality import LayerCentralityMatrix, build_centrality_matrix
from .engine import NonConvergenceError, shifted_power_iteration, tableau_from_vector
from .graph import strongly_connected
from .types import CentralityKind, CentralityTableau, MultiplexNetwork, SupraProblem

__all__ = [
    "DegenerateLayerEigenvalueError",
    "DegenerateInterlayerEigenvalueError",
    "ReducibleDominatingSetError",
    "NotApplicableError",
    "LayerEigendata",
    "WeakLimitResult",
    "StrongLimitResult",
    "CorollaryCheck",
    "layer_eigendata",
    "weak_limit",
    "strong_limit",
    "corollary_crosscheck",
]

# Relative eigen-gap below which a dominant eigenvalue is treated as degenerate.
LAYER_GAP_FLOOR = 1e-6
INTERLAYER_GAP_FLOOR = 1e-8


class DegenerateLayerEigenvalueError(RuntimeError):
    """A layer's dominant eigenvalue is (numerically) not simple."""

    def __init__(self, layer: int, radius: float, second: float):
        self.layer = layer
        super().__init__(
            f"layer {layer}: dominant eigenvalue {radius:.6g} is not well separated "
            f"(second magnitude estimate {second:.6g})"
        )


class DegenerateInterlayerEigenvalueError(RuntimeError):
    """The interlayer matrix's dominant eigenvalue is not simple."""


class ReducibleDominatingSetError(RuntimeError):
    """The interlayer matrix restricted to the dominating layers is not
    strongly connected, so the limit mixing weights are not unique."""


class NotApplicableError(ValueError):
    """The interlayer matrix matches none of the closed-form special shapes."""


@dataclass(frozen=True, eq=False)
class LayerEigendata:
    """Per-layer dominant eigendata: spectral radius and unit right/left vectors.

    ``right[t]`` and ``left[t]`` are the 0-indexed layer t+1 vectors;
    ``irreducible[t]`` flags whether that layer's centrality matrix is
    irreducible (vectors of non-irreducible layers need not be unique or
    positive).
    """

    spectral_radii: np.ndarray   # (T,)
    right: np.ndarray            # (T, N)
    left: np.ndarray             # (T, N)
    irreducible: tuple[bool, ...]

    @property
    def n_layers(self) -> int:
        return self.spectral_radii.shape[0]


@dataclass(frozen=True, eq=False)
class WeakLimitResult:
    """Zero-coupling limit: dominating layers, mixing weights, limiting tableau.

    ``dominating_set`` holds 1-based layer indices; ``alpha``/``beta`` are the
    right/left mixing weights over that set (unit Euclidean norm); ``lambda1``
    is the first-order eigenvalue correction (the dominant eigenvalue of the
    auxiliary matrix X).  The tableau's lambda_max is the zero-coupling
    eigenvalue itself, i.e. the largest layer spectral radius.
    """

    dominating_set: tuple[int, ...]
    lambda1: float
    alpha: np.ndarray
    beta: np.ndarray
    X: np.ndarray
    tableau: CentralityTableau
    layer_data: LayerEigendata


@dataclass(frozen=True, eq=False)
class StrongLimitResult:
    """Infinite-coupling limit: layer aggregation.

    ``mu1`` with ``v_tilde``/``u_tilde`` is the dominant eigendata of the
    interlayer matrix; ``X_tilde`` is the aggregate node matrix (weighted
    entrywise sum of the layer matrices); ``alpha_tilde``/``beta_tilde`` are
    its dominant right/left eigenvectors and ``x_eigenvalue`` its computed
    dominant eigenvalue.  The two eigenvalues coincide only after the
    1/omega rescaling of the coupled operator, so both are reported.  The
    limiting joint centralities are separable: W[i, t] is proportional to
    alpha_tilde[i] * v_tilde[t].
    """

    mu1: float
    v_tilde: np.ndarray
    u_tilde: np.ndarray
    X_tilde: np.ndarray
    alpha_tilde: np.ndarray
    beta_tilde: np.ndarray
    x_eigenvalue: float
    tableau: CentralityTableau


def _layer_matrix_irreducible(mat: LayerCentralityMatrix) -> bool:
    if mat.teleport_coeff > 0 and mat.teleport is not None and mat.teleport.min() > 0:
        return True
    if mat.teleport_coeff > 0:
        return strongly_connected(mat.to_dense())
    return strongly_connected(mat.sparse)


def _second_magnitude_estimate(
    matvec,
    dim: int,
    shift: float,
    mu_shifted: float,
    right: np.ndarray,
    left: np.ndarray,
    iters: int = 1500,
) -> float:
    """Magnitude of the subdominant eigenvalue of the shifted operator.

    Power iteration deflated against the known dominant pair at every step;
    the estimate is the geometric mean of the late growth factors.  It
    resolves relative gaps down to roughly 1e-3 and is exact for genuine
    multiplicity, which is what the degeneracy guard needs.
    """
    if dim == 1:
        return 0.0
    denom = float(left @ right)
    if abs(denom) < 1e-300:
        return mu_shifted  # defective pairing; report as degenerate
    rng = np.random.default_rng(1234)
    x = rng.standard_normal(dim)
    x /= np.linalg.norm(x)
    growth = []
    for _ in range(iters):
        y = matvec(x) + shift * x
        y -= (mu_shifted * float(left @ x) / denom) * right
        nrm = float(np.linalg.norm(y))
        if nrm < 1e-300:
            return 0.0
        growth.append(nrm)
        x = y / nrm
    tail = np.array(growth[len(growth) // 3 :])
    return float(np.exp(np.mean(np.log(tail))))


def layer_eigendata(
    net: MultiplexNetwork,
    kind: CentralityKind,
    *,
    tol: float = 1e-12,
    max_iter: int = 100_000,
    check_gap: bool = True,
    layer_matrices: tuple[LayerCentralityMatrix, ...] | None = None,
) -> LayerEigendata:
    """Dominant right/left eigenpair of every layer's centrality matrix.

    Uses the same shifted power iteration as the coupled engine, applied per
    block.  Non-irreducible layers are flagged rather than rejected.  With
    ``check_gap`` a deflated second iteration guards against (near-)multiple
    dominant eigenvalues, raising DegenerateLayerEigenvalueError.
    """
    if layer_matrices is None:
        layer_matrices = tuple(build_centrality_matrix(g, kind) for g in net.layers)
    n = net.n_nodes
    t_count = len(layer_matrices)
    radii = np.zeros(t_count)
    right = np.zeros((t_count, n))
    left = np.zeros((t_count, n))
    flags = []
    for t, mat in enumerate(layer_matrices):
        shift = 0.1 * (1.0 + mat.max_row_sum())
        try:
            res_r = shifted_power_iteration(
                mat.apply, n, shift=shift, tol=tol, max_iter=max_iter
            )
            res_l = shifted_power_iteration(
                mat.apply_transpose, n, shift=shift, tol=tol, max_iter=max_iter
            )
        except NonConvergenceError as err:
            raise NonConvergenceError(
                err.iterations, err.residual, f"layer {t + 1}"
            ) from err
        radii[t] = res_r.eigenvalue
        right[t] = res_r.vector
        left[t] = res_l.vector
        flags.append(_layer_matrix_irreducible(mat))
        if check_gap and n > 1:
            mu_shifted = res_r.eigenvalue + shift
            second = _second_magnitude_estimate(
                mat.apply, n, shift, mu_shifted, res_r.vector, res_l.vector
            )
            if second >= (1.0 - LAYER_GAP_FLOOR) * mu_shifted:
                raise DegenerateLayerEigenvalueError(t + 1, radii[t], second - shift)
    return LayerEigendata(
        spectral_radii=radii, right=right, left=left, irreducible=tuple(flags)
    )


def _auto_shift(matvec, dim: int) -> float:
    row_sums = matvec(np.ones(dim))
    return 0.1 * (1.0 + float(np.max(row_sums)))


def weak_limit(
    problem: SupraProblem,
    rel_tol_dominating: float = 1e-9,
    *,
    tol: float = 1e-12,
    max_iter: int = 100_000,
) -> WeakLimitResult:
    """Limit of the dominant eigenvector as the coupling strength tends to 0+.

    The dominating set collects the layers whose spectral radius is within
    ``rel_tol_dominating`` (relative) of the maximum; radii are exact ties
    mathematically, so the tolerance only absorbs solver round-off.  The
    mixing weights alpha (right) and beta (left) solve the dominant
    eigenproblem of X[a, b] = interlayer[ta, tb] * <u_ta, v_tb> / <u_ta, v_ta>
    over the dominating layers.  With a single dominating layer this reduces
    to localization: the limit vector is that layer's eigenvector.
    """
    net = problem.network
    data = layer_eigendata(net, problem.kind, tol=tol, max_iter=max_iter)
    radii = data.spectral_radii
    lam0 = float(radii.max())
    dominating = np.flatnonzero(radii >= (1.0 - rel_tol_dominating) * lam0)
    tset = tuple(int(t) + 1 for t in dominating)

    atil = problem.interlayer.values
    m = len(dominating)
    X = np.zeros((m, m))
    for a, ta in enumerate(dominating):
        u_a = data.left[ta]
        denom = float(u_a @ data.right[ta])
        if denom <= 0:
            raise DegenerateLayerEigenvalueError(int(ta) + 1, radii[ta], radii[ta])
        for b, tb in enumerate(dominating):
            X[a, b] = atil[ta, tb] * float(u_a @ data.right[tb]) / denom
    if not strongly_connected(X):
        raise ReducibleDominatingSetError(
            f"interlayer coupling restricted to the dominating layers {tset} "
            "is not strongly connected; the limit mixing weights are not unique"
        )

    shift = _auto_shift(lambda z: X @ z, m)
    res_r = shifted_power_iteration(lambda z: X @ z, m, shift=shift, tol=tol, max_iter=max_iter)
    res_l = shifted_power_iteration(lambda z: X.T @ z, m, shift=shift, tol=tol, max_iter=max_iter)
    alpha = res_r.vector
    beta = res_l.vector

    W = np.zeros((net.n_nodes, net.n_layers))
    for a, ta in enumerate(dominating):
        W[:, ta] = alpha[a] * data.right[ta]
    vector = W.flatten(order="F")
    tableau = tableau_from_vector(vector, net.n_nodes, net.n_layers, lam0, 0.0)
    return WeakLimitResult(
        dominating_set=tset,
        lambda1=res_r.eigenvalue,
        alpha=alpha,
        beta=beta,
        X=X,
        tableau=tableau,
        layer_data=data,
    )


def _interlayer_eigendata(
    atil: np.ndarray, tol: float, max_iter: int
) -> tuple[float, np.ndarray, np.ndarray]:
    dim = atil.shape[0]
    eigs = np.linalg.eigvals(atil)
    mu1_dense = float(eigs.real.max())
    near = np.abs(eigs - mu1_dense) <= INTERLAYER_GAP_FLOOR * max(abs(mu1_dense), 1.0)
    if int(near.sum()) > 1:
        raise DegenerateInterlayerEigenvalueError(
            f"top interlayer eigenvalue {mu1_dense:.6g} has multiplicity "
            f"{int(near.sum())} within relative tolerance {INTERLAYER_GAP_FLOOR}"
        )
    shift = 0.1 * (1.0 + float(np.abs(atil).sum(axis=1).max()))
    res_r = shifted_power_iteration(
        lambda z: atil @ z, dim, shift=shift, tol=tol, max_iter=max_iter
    )
    res_l = shifted_power_iteration(
        lambda z: atil.T @ z, dim, shift=shift, tol=tol, max_iter=max_iter
    )
    return res_r.eigenvalue, res_r.vector, res_l.vector


def strong_limit(
    problem: SupraProblem,
    *,
    tol: float = 1e-12,
    max_iter: int = 100_000,
) -> StrongLimitResult:
    """Limit of the dominant eigenvector as the coupling strength tends to infinity.

    After rescaling by 1/omega the coupled operator tends to the interlayer
    coupling alone, whose dominant eigenvalue mu1 (required simple) the
    rescaled eigenvalue approaches.  Node weights alpha_tilde solve the
    dominant eigenproblem of the aggregate matrix
    X_tilde = sum_t layer_t * v_tilde[t] * u_tilde[t] / <u_tilde, v_tilde>,
    formed as a weighted entrywise sum of the sparse layer matrices.  The
    aggregate's own dominant eigenvalue is reported alongside mu1: the two
    live on different scales of the original problem.
    """
    net = problem.network
    mu1, v_tilde, u_tilde = _interlayer_eigendata(
        problem.interlayer.values, tol, max_iter
    )
    denom = float(u_tilde @ v_tilde)
    if denom <= 0:
        raise DegenerateInterlayerEigenvalueError(
            "left/right interlayer eigenvectors are orthogonal; limit undefined"
        )
    weights = u_tilde * v_tilde / denom

    mats = tuple(build_centrality_matrix(g, problem.kind) for g in net.layers)
    n = net.n_nodes
    sparse_sum = sum(w * m.sparse for w, m in zip(weights, mats))
    rank_ones = [
        (m.teleport_coeff * w, m.teleport)
        for w, m in zip(weights, mats)
        if m.teleport_coeff > 0
    ]

    def xt_apply(z: np.ndarray) -> np.ndarray:
        y = sparse_sum @ z
        for coeff, u in rank_ones:
            y = y + (coeff * float(z.sum())) * u
        return y

    def xt_apply_t(z: np.ndarray) -> np.ndarray:
        y = sparse_sum.T @ z
        for coeff, u in rank_ones:
            y = y + coeff * float(u @ z)
        return y

    shift = _auto_shift(xt_apply, n)
    res_r = shifted_power_iteration(xt_apply, n, shift=shift, tol=tol, max_iter=max_iter)
    res_l = shifted_power_iteration(xt_apply_t, n, shift=shift, tol=tol, max_iter=max_iter)
    alpha_tilde = res_r.vector
    beta_tilde = res_l.vector

    x_dense = sparse_sum.toarray()
    for coeff, u in rank_ones:
        x_dense = x_dense + coeff * np.outer(u, np.ones(n))

    W = np.outer(alpha_tilde, v_tilde)
    vector = W.flatten(order="F")
    tableau = tableau_from_vector(
        vector, net.n_nodes, net.n_layers, mu1, float("inf")
    )
    return StrongLimitResult(
        mu1=mu1,
        v_tilde=v_tilde,
        u_tilde=u_tilde,
        X_tilde=x_dense,
        alpha_tilde=alpha_tilde,
        beta_tilde=beta_tilde,
        x_eigenvalue=res_r.eigenvalue,
        tableau=tableau,
    )


@dataclass(frozen=True, eq=False)
class CorollaryCheck:
    """Comparison of the general strong-coupling path against a closed form.

    ``shape`` names the detected interlayer pattern (chain, all_to_all, or
    rank_one).  ``mu1_closed_form`` for the all-ones matrix is its dimension;
    the check reports the discrepancy instead of hard-coding assumptions
    into the solver.
    """

    shape: str
    mu1_computed: float
    mu1_closed_form: float
    mu1_discrepancy: float
    x_max_discrepancy: float
    weights_closed_form: np.ndarray


def _detect_shape(atil: np.ndarray) -> tuple[str, np.ndarray | None]:
    dim = atil.shape[0]
    if dim >= 2:
        chain = np.zeros_like(atil)
        idx = np.arange(dim - 1)
        chain[idx, idx + 1] = 1.0
        chain[idx + 1, idx] = 1.0
        if np.array_equal(atil, chain):
            return "chain", None
    if np.array_equal(atil, np.ones_like(atil)):
        return "all_to_all", None
    if np.allclose(atil, atil.T, atol=1e-12):
        diag = np.diag(atil)
        if diag.min() >= 0:
            w = np.sqrt(diag)
            if np.allclose(np.outer(w, w), atil, atol=1e-12):
                if abs(float(w @ w) - 1.0) <= 1e-9:
                    return "rank_one", w
                raise NotApplicableError(
                    "rank-one coupling detected, but its generating vector is not "
                    "unit-norm; the closed form assumes a unit vector"
                )
    raise NotApplicableError("interlayer matrix matches no special closed-form shape")


def corollary_crosscheck(
    problem: SupraProblem,
    *,
    tol: float = 1e-12,
    max_iter: int = 100_000,
) -> CorollaryCheck:
    """Evaluate the applicable closed form and compare with the general path.

    Chain coupling: dominant eigenvalue 2 cos(pi / (T + 1)) and aggregation
    weights proportional to sin^2(pi t / (T + 1)).  All-ones coupling: the
    aggregate matrix is the plain layer mean.  Unit-norm rank-one coupling
    w w^T: eigenvalue 1 and weights w_t^2.  Raises NotApplicableError for
    any other interlayer matrix.
    """
    atil = problem.interlayer.values
    dim = atil.shape[0]
    shape, w = _detect_shape(atil)
    result = strong_limit(problem, tol=tol, max_iter=max_iter)

    t_idx = np.arange(1, dim + 1)
    if shape == "chain":
        mu_formula = 2.0 * math.cos(math.pi / (dim + 1))
        s = np.sin(math.pi * t_idx / (dim + 1)) ** 2
        weights = s / s.sum()
    elif shape == "all_to_all":
        mu_formula = float(dim)
        weights = np.full(dim, 1.0 / dim)
    else:
        mu_formula = 1.0
        weights = w * w

    mats = tuple(build_centrality_matrix(g, problem.kind) for g in problem.network.layers)
    x_formula = np.zeros((problem.network.n_nodes, problem.network.n_nodes))
    for wt, m in zip(weights, mats):
        x_formula += wt * m.to_dense()

    return CorollaryCheck(
        shape=shape,
        mu1_computed=result.mu1,
        mu1_closed_form=mu_formula,
        mu1_discrepancy=abs(result.mu1 - mu_formula),
        x_max_discrepancy=float(np.abs(result.X_tilde - x_formula).max()),
        weights_closed_form=weights,
    )
