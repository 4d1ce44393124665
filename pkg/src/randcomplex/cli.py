"""Command-line entry point: sample, analyse, replay and run Monte Carlo experiments."""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import __version__
from .cohomology import cohomology
from .complex import Complex, connected_components
from .errors import GuardExceeded, InvalidAtThisN, InvalidInput, SearchSpaceTooLarge
from .montecarlo import (mc_expectations, mc_poisson_window, threshold_sweep, window_report,
                         write_records)
from .obstructions import find_local_obstacles, find_M_copies, find_Mhat_copies
from .parametrisation import (E_constant, critical_window_expectation, evaluate_pbar,
                              exact_expected_Xjk, lambda_mu_nu, load_direction,
                              threshold_direction)
from .process import connectedness_intervals, hitting_time, sample_process, snapshot
from .rings import parse_ring

EXIT_OK, EXIT_USAGE, EXIT_GUARD = 0, 2, 3
# complexes are materialised simplex by simplex
GEN_CAP = 200_000


class UsageError(Exception):
    pass


def _direction(args):
    if args.direction:
        dp = load_direction(args.direction)
        if args.d is not None and args.d != dp.d:
            raise UsageError(f"--d {args.d} disagrees with the direction file (d={dp.d})")
        if args.j is not None and args.j != dp.j:
            raise UsageError(f"--j {args.j} disagrees with the direction file (j={dp.j})")
        return dp
    d = 2 if args.d is None else args.d
    j = 1 if args.j is None else args.j
    return threshold_direction(d, j)


def _config(args, **extra) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k not in ("func", "out_handle")}
    cfg["version"] = __version__
    cfg.update(extra)
    return cfg


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _positive(name: str, value) -> None:
    if value is not None and value < 1:
        raise UsageError(f"--{name} must be at least 1")


def cmd_gen(args) -> int:
    dp = _direction(args)
    if args.tau < 0:
        raise UsageError("--tau must be nonnegative")
    tr = sample_process(args.n, dp, args.seed, tau_cap=args.tau, memory_cap=GEN_CAP)
    c = snapshot(tr, args.tau)
    out = {"config": _config(args, direction=dp.to_dict())}
    out.update(c.to_dict())
    _emit(args, json.dumps(out, sort_keys=True) + "\n")
    return EXIT_OK


def analyze(c: Complex, j: int, ring) -> dict:
    """Report used by the analyze command: ranks, obstructions and components."""
    if not 1 <= j <= max(c.d, 1):
        raise InvalidInput(f"need 1 <= j <= d = {c.d}")
    report = {"n": c.n, "d": c.d, "j": j, "ring": str(ring),
              "components": [sorted(comp) for comp in connected_components(c)],
              "cohomology": [cohomology(c, i, ring).to_dict() for i in range(0, j + 1)]}
    M, Mhat = {}, {}
    for k in range(j, c.d + 1):
        M[str(k)] = [m.to_dict() for m in find_M_copies(c, j, k)]
        Mhat[str(k)] = [m.to_dict() for m in find_Mhat_copies(c, j, k)]
    report["M_copies"] = M
    report["Mhat_copies"] = Mhat
    report["local_obstacles"] = [{"K": list(K), "localised": [list(J) for J in loc]}
                                 for K, loc in find_local_obstacles(c, j)]
    report["cohom_connected"] = (len(report["components"]) == 1 and all(
        h["free_rank"] == 0 and not h["torsion"] for h in report["cohomology"][1:]))
    return report


def cmd_analyze(args) -> int:
    try:
        with open(args.complex) as fh:
            c = Complex.from_json(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read {args.complex}: {exc}") from exc
    j = 1 if args.j is None else args.j
    report = analyze(c, j, parse_ring(args.ring))
    _emit(args, json.dumps(report, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_process(args) -> int:
    _positive("trials", args.trials)
    dp = _direction(args)
    records = []
    for t in range(args.trials):
        tr = sample_process(args.n, dp, args.seed, tau_cap=args.tau_cap, stream=(t,))
        rep = hitting_time(tr, dp.j, args.method)
        if args.intervals:
            rep.connected_intervals = connectedness_intervals(tr, dp.j, parse_ring(args.ring))
        rec = {"trial": t, "events": len(tr.events)}
        rec.update(rep.to_dict())
        records.append(rec)
    cfg = _config(args, direction=dp.to_dict())
    _emit(args, write_records(records, cfg, args.format))
    return EXIT_OK


def cmd_critical(args) -> int:
    dp = _direction(args)
    rep = lambda_mu_nu(dp, args.n)
    pv = evaluate_pbar(dp, args.n).scaled(1 + args.c / math.log(args.n))
    out = {"config": _config(args, direction=dp.to_dict())}
    out.update(rep.to_dict())
    out["critical"] = rep.c1 and rep.c2
    out["E"] = E_constant(dp, args.n, args.c)
    out["E_k"] = {str(k): v for k, v in critical_window_expectation(dp, args.n, args.c).items()}
    out["exact_expected_X"] = {str(k): exact_expected_Xjk(pv, dp.j, k)
                               for k in range(dp.j, dp.d + 1)}
    _emit(args, json.dumps(out, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_mc(args) -> int:
    _positive("trials", args.trials)
    dp = _direction(args)
    if args.c is not None:
        ws = mc_poisson_window(args.n, dp, args.c, args.trials, args.seed, args.threads)
        summary = window_report(ws, dp, args.c)
    else:
        tau = 1.0 if args.tau is None else args.tau
        ws = mc_expectations(args.n, dp, tau, args.trials, args.seed, args.threads)
        summary = ws.summary()
    cfg = _config(args, direction=dp.to_dict())
    if args.format == "csv":
        records = [summary]
    else:
        records = [{"trial": t, "X": dict(zip(map(str, ws.ks), map(int, ws.X[t]))),
                    "Xhat": dict(zip(map(str, ws.ks), map(int, ws.Xhat[t])))}
                   for t in range(ws.trials)]
        records.append(dict(summary, summary=True))
    _emit(args, write_records(records, cfg, args.format))
    return EXIT_OK


def cmd_sweep(args) -> int:
    _positive("trials", args.trials)
    dp = _direction(args)
    rows = threshold_sweep(args.n, dp, dp.j, args.trials, args.seed, tuple(args.taus),
                           cohomology_checks=not args.no_cohomology)
    _emit(args, write_records(rows, _config(args, direction=dp.to_dict()), args.format))
    return EXIT_OK


def _common(p: argparse.ArgumentParser, n_list: bool = False) -> None:
    if n_list:
        p.add_argument("--n", type=int, nargs="+", required=True, help="vertex counts")
    else:
        p.add_argument("--n", type=int, required=True, help="number of vertices")
    p.add_argument("--d", type=int, help="top dimension (default 2)")
    p.add_argument("--j", type=int, help="cohomology degree (default 1)")
    p.add_argument("--direction", help="INI file with the per-dimension parameters")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="randcomplex", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="sample one complex and write its facets as JSON")
    _common(p)
    p.add_argument("--tau", type=float, default=1.0)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("analyze", help="cohomology and obstructions of a facet-JSON complex")
    p.add_argument("complex", help="path to a file written by gen")
    p.add_argument("--j", type=int)
    p.add_argument("--ring", default="f2", help="f2 | fp:<p> | z | zmod:<m>")
    p.add_argument("--out")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("process", help="sample traces and report hitting times")
    _common(p)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--tau-cap", type=float, default=None,
                   help="only sample births up to this scaled time")
    p.add_argument("--method", choices=["auto", "fast", "replay"], default="auto")
    p.add_argument("--intervals", action="store_true",
                   help="also track connectedness intervals (small n only)")
    p.add_argument("--ring", default="f2")
    p.add_argument("--format", choices=["jsonl", "csv"], default="jsonl")
    p.set_defaults(func=cmd_process)

    p = sub.add_parser("critical", help="criticality report for a direction")
    _common(p)
    p.add_argument("--c", type=float, default=0.0)
    p.set_defaults(func=cmd_critical)

    p = sub.add_parser("mc", help="obstruction counts at fixed tau or in the critical window")
    _common(p)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--tau", type=float)
    g.add_argument("--c", type=float, help="use tau = 1 + c/log n and compare with Poisson")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--format", choices=["jsonl", "csv"], default="jsonl")
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("sweep", help="connectivity and vanishing probabilities over a tau grid")
    _common(p, n_list=True)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--taus", type=float, nargs="+", default=[0.5, 0.8, 0.9, 1.0, 1.1, 1.2, 1.5])
    p.add_argument("--no-cohomology", action="store_true")
    p.add_argument("--format", choices=["jsonl", "csv"], default="csv")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, InvalidInput, InvalidAtThisN) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GuardExceeded, SearchSpaceTooLarge) as exc:
        print(f"guard exceeded: {exc}", file=sys.stderr)
        return EXIT_GUARD


if __name__ == "__main__":
    sys.exit(main())
