"""Command-line frontend.

Exit codes: 0 success, 1 usage error, 2 validation or precondition failure,
3 eigensolver non-convergence.  All subcommands are deterministic: repeat
runs with the same inputs produce byte-identical output files.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import fileio
from .centrality import build_centrality_matrix
from .engine import NonConvergenceError, SupraOperator, dominant_eigenpair, tableau_from_vector
from .graph import check_preconditions
from .interlayer import all_to_all, block_communities, chain_teleport, chain_undirected
from .limits import NotApplicableError, corollary_crosscheck, strong_limit, weak_limit
from .sweeps import correlate_with_degrees, detect_regimes, log_grid, rank_trajectory, sweep
from .types import (
    Authority,
    DanglingPolicy,
    Eigenvector,
    Hub,
    InterlayerMatrix,
    MultiplexNetwork,
    PageRank,
    SupraProblem,
)
from .versatility import pagerank_versatility

__all__ = ["dispatch", "main"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_NO_CONVERGENCE = 3


class UsageError(ValueError):
    pass


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def _load_network(args) -> MultiplexNetwork:
    return fileio.load_multiplex(
        args.network,
        node_labels_path=args.node_labels,
        layer_labels_path=args.layer_labels,
        n_nodes=args.nodes,
    )


def _build_kind(args):
    name = args.kind
    if name == "eigenvector":
        return Eigenvector()
    if name == "hub":
        return Hub()
    if name == "authority":
        return Authority()
    if name == "pagerank":
        policy = DanglingPolicy.DANGLING_ONLY if args.dangling == "only" else DanglingPolicy.ALL_NODES
        try:
            return PageRank(sigma=args.sigma, dangling=policy)
        except ValueError as err:
            raise UsageError(str(err)) from err
    raise UsageError(f"unknown centrality kind {name!r}")


def _build_interlayer(spec: str, n_layers: int) -> InterlayerMatrix:
    """Parse an --interlayer spec:
    alltoall | chain | teleport:<gamma> | blocks:<spec> | file:<path>."""
    try:
        if spec == "alltoall":
            return all_to_all(n_layers, include_self=True)
        if spec == "chain":
            return chain_undirected(n_layers)
        if spec.startswith("teleport:"):
            return chain_teleport(n_layers, float(spec.split(":", 1)[1]))
        if spec.startswith("blocks:"):
            return _parse_blocks(spec.split(":", 1)[1], n_layers)
        if spec.startswith("file:"):
            return fileio.load_interlayer(spec.split(":", 1)[1], n_layers)
    except fileio.ParseError:
        raise
    except ValueError as err:
        raise UsageError(f"bad interlayer spec {spec!r}: {err}") from err
    raise UsageError(f"unknown interlayer spec {spec!r}")


def _parse_blocks(body: str, n_layers: int) -> InterlayerMatrix:
    # format: sizes=3,3;intra=1;inter=0.01
    fields = {}
    for item in body.split(";"):
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"bad blocks field {item!r}")
        fields[key.strip()] = value.strip()
    missing = {"sizes", "intra", "inter"} - fields.keys()
    if missing:
        raise UsageError(f"blocks spec missing {sorted(missing)}")
    sizes = tuple(int(s) for s in fields["sizes"].split(","))
    return block_communities(n_layers, sizes, float(fields["intra"]), float(fields["inter"]))


def _parse_grid(spec: str):
    parts = spec.split(",")
    if len(parts) != 3:
        raise UsageError(f"--grid expects 'lo,hi,step', got {spec!r}")
    try:
        lo, hi, step = (float(p) for p in parts)
        return log_grid(lo, hi, step)
    except ValueError as err:
        raise UsageError(f"bad grid {spec!r}: {err}") from err


def _solve(problem: SupraProblem, tol: float, max_iter: int):
    matrices = tuple(
        build_centrality_matrix(layer, problem.kind) for layer in problem.network.layers
    )
    report = check_preconditions(problem, matrices)
    if not report.both_ok:
        print(
            "warning: uniqueness preconditions not satisfied "
            f"(interlayer_ok={report.interlayer_ok}, layer_sum_ok={report.layer_sum_ok}); "
            "computing anyway",
            file=sys.stderr,
        )
    op = SupraOperator(problem, layer_matrices=matrices)
    pair = dominant_eigenpair(op, tol=tol, max_iter=max_iter)
    net = problem.network
    tableau = tableau_from_vector(
        pair.vector, net.n_nodes, net.n_layers, pair.eigenvalue, problem.omega
    )
    return tableau, pair, report


def _cmd_check(args) -> int:
    net = _load_network(args)
    kind = _build_kind(args)
    interlayer = _build_interlayer(args.interlayer, net.n_layers)
    problem = SupraProblem(network=net, kind=kind, interlayer=interlayer, omega=1.0)
    report = check_preconditions(problem)
    print(
        json.dumps(
            {"interlayer_ok": report.interlayer_ok, "layer_sum_ok": report.layer_sum_ok}
        )
    )
    return EXIT_OK if report.both_ok else EXIT_VALIDATION


def _cmd_centrality(args) -> int:
    net = _load_network(args)
    kind = _build_kind(args)
    interlayer = _build_interlayer(args.interlayer, net.n_layers)
    problem = SupraProblem(network=net, kind=kind, interlayer=interlayer, omega=args.omega)
    tableau, pair, report = _solve(problem, args.tol, args.max_iter)
    fileio.write_tableau_csv(tableau, net, args.out)
    if args.summary:
        fileio.write_summary_json(args.summary, tableau, pair, report)
    return EXIT_OK


def _run_sweep(args, net, kind, interlayer):
    grid = _parse_grid(args.grid)
    return sweep(
        net,
        kind,
        interlayer,
        grid,
        tol=args.tol,
        max_iter=args.max_iter,
        warm_start=not getattr(args, "no_warm_start", False),
    )


def _cmd_sweep(args) -> int:
    net = _load_network(args)
    kind = _build_kind(args)
    interlayer = _build_interlayer(args.interlayer, net.n_layers)
    result = _run_sweep(args, net, kind, interlayer)
    fileio.write_sweep_csv(result, net, args.out)
    for index, message in result.failures:
        print(f"warning: grid point {index + 1} failed: {message}", file=sys.stderr)
    if len(result.grid) >= 4:
        report = detect_regimes(result.z_sensitivity, result.grid, args.prominence)
        print(f"z-sensitivity peaks: {len(report.peaks)}, regimes: {len(report.intervals)}")
        for k, interval in enumerate(report.intervals, start=1):
            print(
                f"regime {k}: omega in [{_fmt(interval.omega_lo)}, {_fmt(interval.omega_hi)}]"
            )
    return EXIT_OK


def _cmd_limit(args) -> int:
    net = _load_network(args)
    kind = _build_kind(args)
    interlayer = _build_interlayer(args.interlayer, net.n_layers)
    problem = SupraProblem(network=net, kind=kind, interlayer=interlayer, omega=1.0)
    if args.which == "weak":
        res = weak_limit(problem, args.rel_tol_dominating)
        payload = {
            "which": "weak",
            "dominating_set": list(res.dominating_set),
            "lambda_max_at_zero": res.tableau.lambda_max,
            "lambda1": res.lambda1,
            "alpha": [float(v) for v in res.alpha],
            "beta": [float(v) for v in res.beta],
            "mnc": [float(v) for v in res.tableau.mnc],
            "mlc": [float(v) for v in res.tableau.mlc],
        }
    else:
        res = strong_limit(problem)
        payload = {
            "which": "strong",
            "mu1": res.mu1,
            "x_eigenvalue": res.x_eigenvalue,
            "v_tilde": [float(v) for v in res.v_tilde],
            "u_tilde": [float(v) for v in res.u_tilde],
            "alpha": [float(v) for v in res.alpha_tilde],
            "beta": [float(v) for v in res.beta_tilde],
            "mnc": [float(v) for v in res.tableau.mnc],
            "mlc": [float(v) for v in res.tableau.mlc],
        }
    try:
        check = corollary_crosscheck(problem)
        payload["corollary_check"] = {
            "shape": check.shape,
            "mu1_computed": check.mu1_computed,
            "mu1_closed_form": check.mu1_closed_form,
            "mu1_discrepancy": check.mu1_discrepancy,
            "x_max_discrepancy": check.x_max_discrepancy,
        }
    except NotApplicableError:
        payload["corollary_check"] = None
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    return EXIT_OK


def _cmd_correlate(args) -> int:
    net = _load_network(args)
    kind = _build_kind(args)
    interlayer = _build_interlayer(args.interlayer, net.n_layers)
    result = _run_sweep(args, net, kind, interlayer)
    rows = correlate_with_degrees(result, net, reference_layer=args.reference_layer)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("omega,r_intralayer,r_total,r_reference\n")
        for row in rows:
            fh.write(
                ",".join(
                    _fmt(v)
                    for v in (
                        row.omega,
                        row.intralayer_vs_conditional,
                        row.total_vs_conditional_sum,
                        row.reference_vs_conditional_sum,
                    )
                )
                + "\n"
            )
    return EXIT_OK


def _cmd_trajectory(args) -> int:
    net = _load_network(args)
    kind = _build_kind(args)
    interlayer = _build_interlayer(args.interlayer, net.n_layers)
    result = _run_sweep(args, net, kind, interlayer)
    ranks = rank_trajectory(result, args.node)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        labels = ",".join(f"rank_{net.layer_label(t)}" for t in range(1, net.n_layers + 1))
        fh.write(f"omega,{labels}\n")
        for s, omega in enumerate(result.grid.values):
            fh.write(_fmt(omega) + "," + ",".join(str(r) for r in ranks[s]) + "\n")
    return EXIT_OK


def _cmd_versatility(args) -> int:
    net = _load_network(args)
    interlayer = _build_interlayer(args.interlayer, net.n_layers)
    if not 0.0 <= args.sigma < 1.0:
        raise UsageError(f"sigma must lie in [0, 1), got {args.sigma}")
    values = pagerank_versatility(net, interlayer, args.omega, args.sigma)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("node,versatility\n")
        for i in range(1, net.n_nodes + 1):
            fh.write(f"{net.node_label(i)},{_fmt(values[i - 1])}\n")
    return EXIT_OK


def _add_kind_flags(parser) -> None:
    parser.add_argument(
        "--kind",
        choices=["eigenvector", "hub", "authority", "pagerank"],
        required=True,
        help="per-layer centrality matrix",
    )
    parser.add_argument("--sigma", type=float, default=0.85, help="PageRank teleportation")
    parser.add_argument(
        "--dangling",
        choices=["only", "all"],
        default="only",
        help="self-edge policy for dangling nodes (PageRank)",
    )


def _add_solver_flags(parser) -> None:
    parser.add_argument("--tol", type=float, default=1e-10, help="residual tolerance")
    parser.add_argument("--max-iter", type=int, default=100_000, help="iteration budget")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--network", required=True, help="multiplex edge-list file")
    common.add_argument("--node-labels", help="node label file (index<TAB>label)")
    common.add_argument("--layer-labels", help="layer label file (index<TAB>label)")
    common.add_argument("--nodes", type=int, help="override the inferred node count")

    parser = argparse.ArgumentParser(
        prog="supracentrality",
        description="Joint, marginal, and conditional centralities for "
        "multiplex and temporal networks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="run the uniqueness precondition report")
    _add_kind_flags(p)
    p.add_argument("--interlayer", required=True)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("centrality", parents=[common], help="solve at one coupling strength")
    _add_kind_flags(p)
    p.add_argument("--interlayer", required=True)
    p.add_argument("--omega", type=float, required=True, help="interlayer coupling strength")
    _add_solver_flags(p)
    p.add_argument("--out", required=True, help="joint-centrality CSV")
    p.add_argument("--summary", help="summary JSON")
    p.set_defaults(func=_cmd_centrality)

    p = sub.add_parser("sweep", parents=[common], help="sweep a log-grid of coupling strengths")
    _add_kind_flags(p)
    p.add_argument("--interlayer", required=True)
    p.add_argument("--grid", required=True, help="lo,hi,step (base-10 exponents)")
    p.add_argument("--no-warm-start", action="store_true")
    p.add_argument("--prominence", type=float, default=0.01, help="peak prominence floor")
    _add_solver_flags(p)
    p.add_argument("--out", required=True, help="sweep CSV")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("limit", parents=[common], help="closed-form coupling limits")
    p.add_argument("--which", choices=["weak", "strong"], required=True)
    _add_kind_flags(p)
    p.add_argument("--interlayer", required=True)
    p.add_argument("--rel-tol-dominating", type=float, default=1e-9)
    p.add_argument("--out", required=True, help="limit JSON")
    p.set_defaults(func=_cmd_limit)

    p = sub.add_parser("correlate", parents=[common], help="degree correlations along a sweep")
    _add_kind_flags(p)
    p.add_argument("--interlayer", required=True)
    p.add_argument("--grid", required=True)
    p.add_argument("--reference-layer", type=int)
    _add_solver_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_correlate)

    p = sub.add_parser("trajectory", parents=[common], help="per-layer rank trajectory of one node")
    p.add_argument("--node", type=int, required=True, help="1-based node index")
    _add_kind_flags(p)
    p.add_argument("--interlayer", required=True)
    p.add_argument("--grid", required=True)
    _add_solver_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_trajectory)

    p = sub.add_parser("versatility", parents=[common], help="PageRank versatility baseline")
    p.add_argument("--interlayer", required=True)
    p.add_argument("--omega", type=float, required=True)
    p.add_argument("--sigma", type=float, default=0.85)
    _add_solver_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_versatility)

    return parser


def _merge_grid_values(argv):
    # argparse mistakes a leading negative exponent in "--grid -2,4,0.2" for
    # an option; fold the value into the flag token
    merged = []
    skip = False
    for pos, token in enumerate(argv):
        if skip:
            skip = False
            continue
        if token == "--grid" and pos + 1 < len(argv):
            merged.append(f"--grid={argv[pos + 1]}")
            skip = True
        else:
            merged.append(token)
    return merged


def dispatch(argv) -> int:
    """Parse arguments, run the selected subcommand, map errors to exit codes."""
    parser = build_parser()
    try:
        args = parser.parse_args(_merge_grid_values(list(argv)))
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (fileio.ParseError, fileio.ValidationError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_VALIDATION
    except NonConvergenceError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_VALIDATION
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))
