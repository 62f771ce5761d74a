"""Coupling-strength sweeps: sensitivity curves, regimes, ranks, correlations.

A sweep solves the coupled eigenproblem across an increasing grid of
coupling strengths, warm-starting each solve from the previous
eigenvector.  The stepwise Frobenius changes of the joint and conditional
centralities trace out how sensitive the rankings are to the coupling
strength; peaks in those curves separate qualitatively stable regimes.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import find_peaks

from .centrality import build_centrality_matrix
from .engine import NonConvergenceError, SupraOperator, dominant_eigenpair, tableau_from_vector
from .graph import ConstantInputError, intralayer_degrees, pearson, total_degrees
from .limits import layer_eigendata
from .types import (
    CentralityKind,
    CentralityTableau,
    InterlayerMatrix,
    MultiplexNetwork,
    SupraProblem,
)

__all__ = [
    "OmegaGrid",
    "SweepResult",
    "RegimeInterval",
    "RegimeReport",
    "DegreeCorrelation",
    "log_grid",
    "sweep",
    "detect_regimes",
    "rank_trajectory",
    "correlate_with_degrees",
]


@dataclass(frozen=True, eq=False)
class OmegaGrid:
    """Strictly increasing positive coupling strengths."""

    values: np.ndarray

    def __post_init__(self):
        arr = np.array(self.values, dtype=float)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("grid must be a nonempty 1-D sequence")
        if arr.min() <= 0:
            raise ValueError("grid values must be positive")
        if arr.size > 1 and np.any(np.diff(arr) <= 0):
            raise ValueError("grid values must be strictly increasing")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return self.values.size


def log_grid(exp_lo: float, exp_hi: float, step: float) -> OmegaGrid:
    """Grid 10**(exp_lo + k*step) for k = 0, 1, ... while the exponent stays
    at or below exp_hi (a tiny slack absorbs float accumulation)."""
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    if exp_lo > exp_hi:
        raise ValueError(f"empty grid: exp_lo {exp_lo} exceeds exp_hi {exp_hi}")
    exponents = []
    k = 0
    while True:
        e = exp_lo + k * step
        if e > exp_hi + 1e-12:
            break
        exponents.append(e)
        k += 1
    return OmegaGrid(np.power(10.0, np.array(exponents)))


@dataclass(frozen=True, eq=False)
class SweepResult:
    """Tableaus along a grid plus the stepwise sensitivity series.

    ``w_sensitivity[s]`` and ``z_sensitivity[s]`` are the Frobenius norms of
    the change in W and Z between grid points s and s+1 (length one less
    than the grid); NaN where either endpoint failed to converge.
    ``failures`` records (grid index, message) for non-converged points,
    whose tableau slots hold None.
    """

    grid: OmegaGrid
    tableaus: tuple[CentralityTableau | None, ...]
    w_sensitivity: np.ndarray
    z_sensitivity: np.ndarray
    failures: tuple[tuple[int, str], ...]
    network: MultiplexNetwork
    kind: CentralityKind
    interlayer: InterlayerMatrix


def sweep(
    network: MultiplexNetwork,
    kind: CentralityKind,
    interlayer: InterlayerMatrix,
    grid: OmegaGrid,
    *,
    tol: float = 1e-10,
    max_iter: int = 100_000,
    warm_start: bool = True,
) -> SweepResult:
    """Solve the coupled eigenproblem at every grid point, in increasing order.

    With ``warm_start`` each solve starts from the previous point's
    eigenvector, which keeps strongly coupled points (where the dominant
    eigenvalue cluster is nearly degenerate) tractable.  A failed point is
    recorded and the sweep continues; the next solve falls back to the
    default start.
    """
    layer_matrices = tuple(build_centrality_matrix(g, kind) for g in network.layers)
    tableaus: list[CentralityTableau | None] = []
    failures: list[tuple[int, str]] = []
    start = None
    for s, omega in enumerate(grid.values):
        problem = SupraProblem(network=network, kind=kind, interlayer=interlayer, omega=float(omega))
        op = SupraOperator(problem, layer_matrices=layer_matrices)
        try:
            pair = dominant_eigenpair(op, tol=tol, max_iter=max_iter, start=start)
        except NonConvergenceError as err:
            failures.append((s, str(err)))
            tableaus.append(None)
            start = None
            continue
        tableaus.append(
            tableau_from_vector(
                pair.vector, network.n_nodes, network.n_layers, pair.eigenvalue, float(omega)
            )
        )
        start = pair.vector if warm_start else None

    count = len(grid)
    w_sens = np.full(max(count - 1, 0), np.nan)
    z_sens = np.full(max(count - 1, 0), np.nan)
    for s in range(count - 1):
        a, b = tableaus[s], tableaus[s + 1]
        if a is None or b is None:
            continue
        w_sens[s] = float(np.linalg.norm(b.W - a.W))
        z_sens[s] = float(np.linalg.norm(b.Z - a.Z))
    return SweepResult(
        grid=grid,
        tableaus=tuple(tableaus),
        w_sensitivity=w_sens,
        z_sensitivity=z_sens,
        failures=tuple(failures),
        network=network,
        kind=kind,
        interlayer=interlayer,
    )


@dataclass(frozen=True)
class RegimeInterval:
    """A maximal run of grid points between two sensitivity peaks (inclusive indices)."""

    first: int
    last: int
    omega_lo: float
    omega_hi: float


@dataclass(frozen=True, eq=False)
class RegimeReport:
    """Peak positions (sensitivity-series indices) and the grid intervals they separate."""

    peaks: tuple[int, ...]
    intervals: tuple[RegimeInterval, ...]


def detect_regimes(
    sensitivity: np.ndarray,
    grid: OmegaGrid,
    prominence_fraction: float = 0.01,
) -> RegimeReport:
    """Partition the grid at the prominent local maxima of a sensitivity series.

    A peak at series index s marks the transition between grid points s and
    s+1; the intervals tile the grid exactly.  Peaks need prominence of at
    least ``prominence_fraction`` times the series maximum, which keeps
    float-level wiggle from fabricating regimes.  NaN entries (failed sweep
    points) are treated as zero for peak finding.
    """
    series = np.asarray(sensitivity, dtype=float)
    if series.ndim != 1 or series.size < 3:
        raise ValueError("sensitivity series must be 1-D with at least 3 points")
    if series.size != len(grid) - 1:
        raise ValueError("sensitivity series must have one entry per grid step")
    clean = np.where(np.isfinite(series), series, 0.0)
    peak_idx: tuple[int, ...] = ()
    top = float(clean.max())
    if top > 0:
        found, _ = find_peaks(clean, prominence=prominence_fraction * top)
        peak_idx = tuple(int(p) for p in found)

    omegas = grid.values
    intervals = []
    first = 0
    for p in peak_idx:
        intervals.append(RegimeInterval(first, p, float(omegas[first]), float(omegas[p])))
        first = p + 1
    intervals.append(
        RegimeInterval(first, len(grid) - 1, float(omegas[first]), float(omegas[-1]))
    )
    return RegimeReport(peaks=peak_idx, intervals=tuple(intervals))


def rank_trajectory(result: SweepResult, node: int) -> np.ndarray:
    """Per-grid-point, per-layer rank of one node's conditional centrality.

    Rank 1 is the largest conditional centrality within the layer; ties go
    to the lower node index.  ``node`` is 1-based.  Rows for failed grid
    points are 0.
    """
    n = result.network.n_nodes
    if not 1 <= node <= n:
        raise ValueError(f"node {node} out of range 1..{n}")
    t_count = result.network.n_layers
    out = np.zeros((len(result.grid), t_count), dtype=int)
    order_tiebreak = np.arange(n)
    for s, tab in enumerate(result.tableaus):
        if tab is None:
            continue
        for t in range(t_count):
            col = tab.Z[:, t]
            order = np.lexsort((order_tiebreak, -col))
            ranks = np.empty(n, dtype=int)
            ranks[order] = np.arange(1, n + 1)
            out[s, t] = ranks[node - 1]
    return out


@dataclass(frozen=True, eq=False)
class DegreeCorrelation:
    """Pearson correlations between degrees and conditional centralities at one
    grid point; a NaN value with its flag set means the correlation was
    undefined (constant input)."""

    omega: float
    intralayer_vs_conditional: float
    total_vs_conditional_sum: float
    reference_vs_conditional_sum: float
    intralayer_constant: bool = False
    total_constant: bool = False
    reference_constant: bool = False


def _safe_pearson(x: np.ndarray, y: np.ndarray) -> tuple[float, bool]:
    try:
        return pearson(x, y), False
    except ConstantInputError:
        return float("nan"), True


def reference_layer_by_spectral_radius(
    network: MultiplexNetwork, kind: CentralityKind
) -> int:
    """1-based index of the layer whose centrality matrix has the largest
    spectral radius (ties go to the lowest index)."""
    data = layer_eigendata(network, kind, check_gap=False)
    return int(np.argmax(data.spectral_radii)) + 1


def correlate_with_degrees(
    result: SweepResult,
    network: MultiplexNetwork | None = None,
    reference_layer: int | None = None,
) -> tuple[DegreeCorrelation, ...]:
    """Degree/centrality correlations at every grid point.

    Three series per point: (a) intralayer degrees against conditional
    centralities over all node-layer pairs (flattened layer-major);
    (b) total degrees against the per-node sum of conditional centralities;
    (c) one reference layer's degrees against that same sum.  The reference
    defaults to the layer with the largest spectral radius.  Failed grid
    points yield all-NaN rows.
    """
    net = network if network is not None else result.network
    if reference_layer is None:
        reference_layer = reference_layer_by_spectral_radius(net, result.kind)
    if not 1 <= reference_layer <= net.n_layers:
        raise ValueError(f"reference layer {reference_layer} out of range 1..{net.n_layers}")
    degrees = intralayer_degrees(net)
    deg_flat = degrees.flatten(order="F")
    totals = total_degrees(net)
    ref = degrees[:, reference_layer - 1]

    rows = []
    for s, tab in enumerate(result.tableaus):
        omega = float(result.grid.values[s])
        if tab is None:
            rows.append(
                DegreeCorrelation(omega, float("nan"), float("nan"), float("nan"))
            )
            continue
        z_flat = tab.Z.flatten(order="F")
        z_sum = tab.Z.sum(axis=1)
        r_a, f_a = _safe_pearson(deg_flat, z_flat)
        r_b, f_b = _safe_pearson(totals, z_sum)
        r_c, f_c = _safe_pearson(ref, z_sum)
        rows.append(
            DegreeCorrelation(
                omega,
                r_a,
                r_b,
                r_c,
                intralayer_constant=f_a,
                total_constant=f_b,
                reference_constant=f_c,
            )
        )
    return tuple(rows)
