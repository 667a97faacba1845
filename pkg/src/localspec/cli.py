"""Command-line entry point: ``localspec <command> --graph PATH --seed SPEC ...``.

Exit codes: 0 success, 1 usage error, 2 bad input data, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .errors import InputError, NumericalError
from .io import (
    RunManifest,
    certificate_to_dict,
    cut_to_dict,
    dumps_artifact,
    load_graph,
    profile_to_csv,
    solution_to_dict,
)
from .localspectral import (
    KAPPA_TOL,
    dual_certificate,
    improvement_bound,
    solve_for_gamma,
    solve_localspectral,
)
from .partition import bfs_ball_baseline, gamma_grid, global_partition, local_sweep, profile
from .seeds import correlation_with_set, parse_seed_spec
from .graph import conductance

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common(p: argparse.ArgumentParser, seed_required: bool = True):
    p.add_argument("--graph", required=True, metavar="PATH", help="edge list or Pajek file")
    p.add_argument("--seed", required=seed_required, metavar="SPEC", help="node:ID, set:ID,ID,... or vec:PATH")
    p.add_argument("--format", choices=("auto", "edgelist", "pajek"), default="auto")
    p.add_argument("--largest-component", action="store_true", help="keep only the largest connected component")
    p.add_argument("--unweighted", action="store_true", help="ignore edge weights")
    p.add_argument("--out", metavar="PATH", help="write the artifact here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="localspec", description="Locally-biased spectral partitioning.")
    parser.add_argument("--version", action="version", version=f"localspec {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("global", help="global v2 sweep cut")
    _common(p, seed_required=False)

    p = sub.add_parser("solve", help="optimal vector for a correlation kappa or a fixed gamma")
    _common(p)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--kappa", type=float)
    g.add_argument("--gamma", type=float)
    p.add_argument("--allow-orthogonal", action="store_true", help="solve seeds orthogonal to v2 via the lambda_2 limit")

    p = sub.add_parser("localcut", help="sweep cut of the vector at gamma")
    _common(p)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--size-factor", type=float, help="cap sweep volume at c * k_gamma (default: no cap)")

    p = sub.add_parser("profile", help="LocalCut over a gamma grid, as CSV")
    _common(p)
    p.add_argument("--gamma-start", type=float, required=True)
    p.add_argument("--gamma-stop", type=float, required=True)
    p.add_argument("--gamma-step", type=float, required=True)
    p.add_argument("--size-factor", type=float, default=2.0)
    p.add_argument("--threads", type=int, help="worker count (default LOCALSPEC_THREADS or CPU count)")
    p.add_argument("--manifest", metavar="PATH", help="manifest path (default <out>.manifest.json)")

    p = sub.add_parser("improve", help="lower bound on the conductance of a target set")
    _common(p)
    p.add_argument("--target-set", required=True, metavar="ID,ID,...")
    p.add_argument("--kappa", type=float, required=True)

    p = sub.add_parser("certify", help="dual certificate for the optimum at kappa")
    _common(p)
    p.add_argument("--kappa", type=float, required=True)
    p.add_argument("--allow-orthogonal", action="store_true")

    p = sub.add_parser("ball", help="BFS-ball conductance baseline around a node")
    _common(p)
    return parser


def _manifest(args, argv) -> RunManifest:
    skip = {"command", "graph", "seed", "out", "manifest", "threads"}
    params = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
    return RunManifest(args.command, args.graph, args.seed, params, __version__, tuple(argv))


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        try:
            Path(out).write_text(text)
        except OSError as exc:
            raise InputError(f"cannot write {out}: {exc}") from None


def _target_ids(graph, spec: str):
    ids = [graph.index_of(x.strip()) for x in spec.split(",") if x.strip()]
    if not ids:
        raise InputError("target set is empty")
    return ids


def _run(args, argv) -> int:
    graph = load_graph(args.graph, args.format, args.largest_component, args.unweighted)
    manifest = _manifest(args, argv)
    seed = parse_seed_spec(graph, args.seed) if args.seed else None
    orthogonal = "limit" if getattr(args, "allow_orthogonal", False) else "raise"
    payload: dict

    if args.command == "global":
        payload = {"cut": cut_to_dict(graph, global_partition(graph))}
    elif args.command == "solve":
        if args.kappa is not None:
            sol = solve_localspectral(graph, seed, args.kappa, KAPPA_TOL, orthogonal=orthogonal)
        else:
            sol = solve_for_gamma(graph, seed, args.gamma)
        payload = {"solution": solution_to_dict(graph, sol)}
    elif args.command == "localcut":
        sweep, sol = local_sweep(graph, seed, args.gamma, args.size_factor)
        payload = {
            "cut": cut_to_dict(graph, sweep.best),
            "volume_cap": sweep.volume_cap,
            "solution": solution_to_dict(graph, sol, include_vector=False),
        }
    elif args.command == "profile":
        grid = gamma_grid(args.gamma_start, args.gamma_stop, args.gamma_step)
        points = profile(graph, seed, grid, args.size_factor, args.threads)
        _emit(profile_to_csv(points), args.out)
        sidecar = args.manifest or (f"{args.out}.manifest.json" if args.out else None)
        if sidecar:
            _emit(dumps_artifact(manifest, {"artifact": args.out, "points": len(points)}), sidecar)
        return EXIT_OK
    elif args.command == "improve":
        target = _target_ids(graph, args.target_set)
        sol = solve_localspectral(graph, seed, args.kappa)
        bound = improvement_bound(graph, seed, args.kappa, target, solution=sol)
        payload = {
            "bound": bound,
            "kappa": args.kappa,
            "kappa_prime": correlation_with_set(graph, seed, target),
            "lambda": sol.lambda_value,
            "target": cut_to_dict(graph, conductance(graph, target)),
        }
    elif args.command == "certify":
        sol = solve_localspectral(graph, seed, args.kappa, orthogonal=orthogonal)
        cert = dual_certificate(graph, seed, sol)
        payload = {
            "certificate": certificate_to_dict(cert),
            "duality_gap": abs(cert.objective - sol.lambda_value),
            "solution": solution_to_dict(graph, sol, include_vector=False),
        }
    elif args.command == "ball":
        if seed.kind != "single_node":
            raise UsageError("ball needs a single-node seed (node:ID)")
        u = seed.node
        payload = {
            "node": graph.labels[u],
            "balls": [{"radius": r, **cut_to_dict(graph, c)} for r, c in bfs_ball_baseline(graph, u)],
        }
    else:  # pragma: no cover - argparse restricts the choices
        raise UsageError(f"unknown command {args.command}")
    _emit(dumps_artifact(manifest, payload), args.out)
    return EXIT_OK


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
        return _run(args, argv)
    except UsageError as exc:
        print(f"localspec: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InputError as exc:
        print(f"localspec: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericalError as exc:
        print(f"localspec: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
