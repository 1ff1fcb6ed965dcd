"""Command line front end.

Exit codes: 0 when an equilibrium is found (PNE or MNE), 2 when the
solver proves there is none, 3 on time limit, 4 when a player's
feasible set is empty, 5 on numerical failure, 1 for usage or
document errors.
"""

import argparse
import sys

from .cutplay import Algorithm, SolverOptions
from .errors import DocumentError, NumericalFailure
from .game import EqStatus
from .lcp import LCPMethod
from .model import load_instance, save_result
from .numerics import Tolerances

_EXIT_BY_STATUS = {
    EqStatus.PNE: 0,
    EqStatus.MNE: 0,
    EqStatus.NO_EQUILIBRIUM_FOUND: 2,
    EqStatus.TIME_LIMIT: 3,
    EqStatus.INFEASIBLE: 4,
    EqStatus.NUMERICAL_FAILURE: 5,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="rbgames",
        description="Compute Nash equilibria of games with bilinear coupling.",
    )
    parser.add_argument("--instance", required=True, help="path to an instance JSON file")
    parser.add_argument(
        "--algorithm",
        choices=[Algorithm.CUT_AND_PLAY, Algorithm.FULL_ENUMERATION],
        default=Algorithm.CUT_AND_PLAY,
        help="solution algorithm (default: cutandplay)",
    )
    parser.add_argument(
        "--tolerance",
        type=float,
        default=3e-4,
        help="deviation tolerance for accepting an equilibrium (default: 3e-4)",
    )
    parser.add_argument("--timelimit", type=float, default=None, help="wall clock limit in seconds")
    parser.add_argument("--threads", type=int, default=1, help="worker count hint (engine is sequential)")
    parser.add_argument(
        "--lcp",
        choices=[LCPMethod.BRANCHING.value, LCPMethod.LEMKE.value],
        default=LCPMethod.BRANCHING.value,
        help="complementarity solver (default: branching)",
    )
    parser.add_argument("--output", default=None, help="write the result document to this path")
    parser.add_argument("--seed", type=int, default=0, help="seed for any randomized choices")
    parser.add_argument("--quiet", action="store_true", help="suppress the human-readable report")
    return parser


def _report(results, names, out):
    head = results[0]
    print(f"status: {head.status.value}", file=out)
    shown = results if len(results) > 1 else results[:1]
    for k, res in enumerate(shown):
        if res.profile is None:
            continue
        if len(shown) > 1:
            print(f"equilibrium {k + 1}:", file=out)
        for i, name in enumerate(names):
            strat = res.profile.strategies[i]
            vec = ", ".join(f"{v:.6g}" for v in strat.barycenter)
            pay = res.payoffs[i]
            print(f"  {name}: x = [{vec}]  payoff = {pay:.6g}", file=out)
            if strat.support is not None and len(strat.support) > 1:
                for w, pt in strat.support:
                    pvec = ", ".join(f"{v:.6g}" for v in pt)
                    print(f"    {w:.6g} * [{pvec}]", file=out)
    stats = head.stats
    print(
        f"iterations: {stats.iterations}  cuts: {stats.cuts}  branches: {stats.branches}"
        f"  lcp nodes: {stats.lcp_nodes}  wall ms: {stats.wall_ms:.1f}",
        file=out,
    )


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    if args.tolerance <= 0:
        print("error: --tolerance must be positive", file=sys.stderr)
        return 1
    if args.threads < 1:
        print("error: --threads must be at least 1", file=sys.stderr)
        return 1
    if args.timelimit is not None and args.timelimit <= 0:
        print("error: --timelimit must be positive", file=sys.stderr)
        return 1
    try:
        inst = load_instance(args.instance)
    except FileNotFoundError:
        print(f"error: no such file: {args.instance}", file=sys.stderr)
        return 1
    except DocumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    opts = SolverOptions(
        algorithm=args.algorithm,
        deviation_eps=args.tolerance,
        time_limit=args.timelimit,
        workers=args.threads,
        lcp_method=LCPMethod(args.lcp),
        seed=args.seed,
        tols=Tolerances(deviation=args.tolerance),
    )
    names = [p.name for p in inst.players]
    try:
        results = inst.solve_all(opts)
    except NumericalFailure as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return 5

    if args.output is not None:
        save_result(results, names, args.output)
    if not args.quiet:
        _report(results, names, sys.stdout)

    code = _EXIT_BY_STATUS.get(results[0].status)
    if code is None:
        print(f"error: unexpected status {results[0].status}", file=sys.stderr)
        return 5
    return code


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
