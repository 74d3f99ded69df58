"""Plot-ready data for the four simulation figures (histogram + overlays).

For each configuration writes ``<out>/<name>.csv`` with columns
    value, count, frequency, theory_density, fitted_density
where the densities are the theoretical and simulation-fitted Gamma (random
strategy) or normal (ordered strategies) curves, and prints a summary line.

    python scripts/reproduce_figures.py --out figures --samples 100000 --seed 1
"""

import argparse
import csv
import json
import math
from pathlib import Path

from lockkeys.analytic import gamma_from_moments, gamma_match_random, moments_ordered
from lockkeys.core import make_problem
from lockkeys.montecarlo import Campaign, fit_gamma_moments, fit_normal_moments, run_campaign
from lockkeys.special import gamma_pdf
from lockkeys.strategies import StrategyKind

CONFIGS = [
    ("fig3_random_8_8", 8, 8, StrategyKind.TOTALLY_RANDOM),
    ("fig4_random_5_10", 5, 10, StrategyKind.TOTALLY_RANDOM),
    ("fig5_keyfirst_10_20", 10, 20, StrategyKind.KEY_FIRST),
    ("fig6_lockfirst_20_20", 20, 20, StrategyKind.LOCK_FIRST),
]


def normal_pdf(x, mu, sigma):
    return math.exp(-0.5 * ((x - mu) / sigma) ** 2) / (sigma * math.sqrt(2 * math.pi))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="figures")
    ap.add_argument("--samples", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    for name, n, N, kind in CONFIGS:
        problem = make_problem(n, N)
        hist = run_campaign(Campaign(problem, kind, args.samples, args.seed))
        if kind is StrategyKind.TOTALLY_RANDOM:
            theory = gamma_match_random(problem)
            report = fit_gamma_moments(hist)
            fitted = gamma_from_moments(*hist.moments())
            dens = (lambda x: gamma_pdf(x, theory), lambda x: gamma_pdf(x, fitted))
        else:
            m = moments_ordered(problem)
            mu, sd = float(m.mean), math.sqrt(m.variance)
            report = fit_normal_moments(hist)
            fmu, fsd = report.params["mu"], report.params["sigma"]
            dens = (lambda x: normal_pdf(x, mu, sd), lambda x: normal_pdf(x, fmu, fsd))
        with open(out / f"{name}.csv", "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["value", "count", "frequency", "theory_density", "fitted_density"])
            for v, c in zip(hist.support, hist.counts):
                w.writerow([int(v), int(c), c / hist.total, dens[0](v), dens[1](v)])
        print(name, json.dumps(report.to_dict()))


if __name__ == "__main__":
    main()
