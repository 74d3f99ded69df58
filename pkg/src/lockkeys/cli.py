"""Command-line entry point: ``lockkeys {analytic,exact,simulate,verify,fit}``.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 degenerate data.
"""

from __future__ import annotations

import argparse
import contextlib
import itertools
import json
import secrets
import sys
from fractions import Fraction

import numpy as np

from . import analytic, exact, montecarlo
from .core import Keyring, Problem, RngStream, random_keyrings
from .exact import BRUTE_FORCE_MAX_KEYS, TruncationPolicy
from .pmf import write_pmf_csv
from .strategies import StrategyKind, batch_key_first, batch_lock_first, equivalent_on

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_DEGENERATE = 0, 1, 2, 3
MAX_IDENTITY_KEYS = 200
STRATEGIES = ("random", "lock-first", "key-first", "ordered")


class UsageError(Exception):
    pass


def _number(x):
    """JSON-friendly number: ints stay ints, everything else becomes a float."""
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    return x


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=False, default=_number)


def _problem(args) -> Problem:
    if args.locks < 0:
        raise UsageError("--locks must be nonnegative")
    if args.keys < 0:
        raise UsageError("--keys must be nonnegative")
    if args.locks > args.keys:
        raise UsageError(f"--locks ({args.locks}) must not exceed --keys ({args.keys})")
    return Problem(args.locks, args.keys)


def _kind(name: str) -> StrategyKind:
    # ``ordered`` names the common law of lock-first and key-first; simulate it as lock-first
    if name == "ordered":
        return StrategyKind.LOCK_FIRST
    return StrategyKind(name)


@contextlib.contextmanager
def _sink(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


# -- subcommands ---------------------------------------------------------------


def cmd_analytic(args) -> int:
    problem = _problem(args)
    kind = _kind(args.strategy)
    out: dict = {"locks": problem.locks, "keys": problem.keys, "strategy": args.strategy}
    if kind is StrategyKind.TOTALLY_RANDOM:
        m = analytic.moments_random(problem)
        out.update(mean=m.mean, variance=m.variance)
        if problem.locks >= 2:
            g = analytic.gamma_match_random(problem)
            out["gamma"] = {"k": g.shape_k, "theta": g.scale_theta}
    else:
        m = analytic.moments_ordered(problem)
        out.update(mean=m.mean, variance=m.variance)
    with _sink(args.output) as fh:
        fh.write(_dump(out) + "\n")
    return EXIT_OK


def cmd_exact(args) -> int:
    problem = _problem(args)
    kind = _kind(args.strategy)
    if not 0.0 < args.eps < 1.0:
        raise UsageError("--eps must lie in (0, 1)")
    if kind is StrategyKind.TOTALLY_RANDOM:
        pmf = exact.exact_pmf_random(problem, TruncationPolicy(args.eps))
    else:
        pmf = exact.exact_pmf_ordered(problem)
    comments = [f"locks={problem.locks} keys={problem.keys} strategy={args.strategy}"]
    if kind is StrategyKind.TOTALLY_RANDOM:
        comments.append(f"truncation_deficit={format(pmf.deficit, '.17g')}")
    with _sink(args.output) as fh:
        if args.format == "json":
            fh.write(_dump({
                "offset": pmf.offset,
                "probabilities": [float(x) for x in pmf.mass],
                "truncation_deficit": pmf.deficit,
            }) + "\n")
        else:
            write_pmf_csv(pmf, fh, comments)
    return EXIT_OK


def cmd_simulate(args) -> int:
    problem = _problem(args)
    if args.samples < 1:
        raise UsageError("--samples must be at least 1")
    if args.workers < 1:
        raise UsageError("--workers must be at least 1")
    seed = args.seed
    if seed is None:
        seed = secrets.randbits(63)
        print(f"seed: {seed}", file=sys.stderr)
    elif seed < 0:
        raise UsageError("--seed must be nonnegative")
    campaign = montecarlo.Campaign(problem, _kind(args.strategy), args.samples, seed,
                                   args.workers)
    hist = montecarlo.run_campaign(campaign)
    mean, var = hist.moments()
    moments = {"samples": hist.total, "mean": mean, "variance": var}
    header = (f"locks={problem.locks} keys={problem.keys} strategy={args.strategy} "
              f"samples={args.samples} seed={seed} workers={args.workers}")
    with _sink(args.output) as fh:
        if args.format == "json":
            fh.write(_dump({**moments, "seed": seed, "workers": args.workers,
                            "histogram": {"offset": hist.offset,
                                          "counts": [int(c) for c in hist.counts]}}) + "\n")
        else:
            montecarlo.write_histogram_csv(hist, fh, [header, "moments " + _dump(moments)])
    if args.output not in (None, "-"):
        sys.stdout.write(_dump(moments) + "\n")
    return EXIT_OK


def _verify_equivalence(args) -> dict:
    problem = _problem(args)
    if args.exhaustive:
        if problem.keys > BRUTE_FORCE_MAX_KEYS:
            raise UsageError(f"--exhaustive needs --keys <= {BRUTE_FORCE_MAX_KEYS}")
        checked = violations = 0
        for order in itertools.permutations(range(1, problem.keys + 1)):
            checked += 1
            if not equivalent_on(problem, Keyring(order)):
                violations += 1
        return {"mode": "equivalence", "locks": problem.locks, "keys": problem.keys,
                "exhaustive": True, "checked": checked, "violations": violations}
    if args.samples is None or args.samples < 1:
        raise UsageError("--samples must be a positive count unless --exhaustive is given")
    seed = args.seed if args.seed is not None else secrets.randbits(63)
    if seed < 0:
        raise UsageError("--seed must be nonnegative")
    rng = RngStream(seed)
    checked = violations = 0
    for start in range(0, args.samples, montecarlo.CHUNK):
        m = min(montecarlo.CHUNK, args.samples - start)
        rings = random_keyrings(problem.keys, m, rng)
        diff = batch_lock_first(problem, rings) != batch_key_first(problem, rings)
        checked += m
        violations += int(diff.sum())
    return {"mode": "equivalence", "locks": problem.locks, "keys": problem.keys,
            "exhaustive": False, "seed": seed, "checked": checked, "violations": violations}


def cmd_verify(args) -> int:
    if args.mode == "identity":
        if args.max_keys is None or not 1 <= args.max_keys <= MAX_IDENTITY_KEYS:
            raise UsageError(f"--max-keys must lie in 1..{MAX_IDENTITY_KEYS}")
        rep = analytic.verify_chu_vandermonde(args.max_keys)
        report = {"mode": "identity", **rep.to_dict()}
    else:
        if args.locks is None or args.keys is None:
            raise UsageError("equivalence needs --locks and --keys")
        report = _verify_equivalence(args)
    with _sink(args.output) as fh:
        fh.write(_dump(report) + "\n")
    return EXIT_OK if report["violations"] == 0 else EXIT_VIOLATION


def cmd_fit(args) -> int:
    try:
        if args.histogram == "-":
            hist = montecarlo.read_histogram_csv(sys.stdin)
        else:
            with open(args.histogram) as fh:
                hist = montecarlo.read_histogram_csv(fh)
    except (OSError, ValueError) as exc:
        raise UsageError(f"histogram: cannot read {args.histogram!r}: {exc}") from exc
    fitter = montecarlo.fit_gamma_moments if args.family == "gamma" else montecarlo.fit_normal_moments
    report = fitter(hist)
    with _sink(args.output) as fh:
        fh.write(_dump(report.to_dict()) + "\n")
    return EXIT_OK


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lockkeys",
        description="Trial counts for opening n locks with a ring of N keys.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def instance(p, required=True):
        p.add_argument("--locks", type=int, required=required, help="number of locks n")
        p.add_argument("--keys", type=int, required=required, help="number of keys N")

    def common(p):
        p.add_argument("--output", default=None, help="output path (default stdout)")

    p = sub.add_parser("analytic", help="closed-form mean, variance and Gamma match")
    instance(p)
    p.add_argument("--strategy", choices=STRATEGIES, required=True)
    common(p)
    p.set_defaults(func=cmd_analytic)

    p = sub.add_parser("exact", help="exact PMF of the total trial count")
    instance(p)
    p.add_argument("--strategy", choices=STRATEGIES, required=True)
    p.add_argument("--eps", type=float, default=1e-9,
                   help="tail mass allowed to be dropped (random strategy)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    common(p)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("simulate", help="Monte Carlo campaign")
    instance(p)
    p.add_argument("--strategy", choices=STRATEGIES, required=True)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="check the strategy equivalence or the marginal identity")
    p.add_argument("mode", choices=("equivalence", "identity"))
    instance(p, required=False)
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--max-keys", type=int, default=None)
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("fit", help="moment-matched Gamma or normal fit of a histogram CSV")
    p.add_argument("histogram", help="histogram CSV path, or - for stdin")
    p.add_argument("--family", choices=("gamma", "normal"), required=True)
    common(p)
    p.set_defaults(func=cmd_fit)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except montecarlo.DegenerateDataError as exc:
        print(f"{parser.prog}: degenerate data: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE


if __name__ == "__main__":
    sys.exit(main())
