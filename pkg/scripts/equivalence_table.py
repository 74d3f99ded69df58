"""Exact law of T for small instances: brute force over all keyrings vs convolution.

    python scripts/equivalence_table.py --max-keys 7
"""

import argparse
import math

from lockkeys.analytic import moments_ordered
from lockkeys.core import make_problem
from lockkeys.exact import brute_force_tally, exact_pmf_ordered
from lockkeys.strategies import StrategyKind


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-keys", type=int, default=6)
    args = ap.parse_args()
    print("n  N  tallies_equal  max|bf-conv|  mean")
    for N in range(1, args.max_keys + 1):
        for n in range(1, N + 1):
            p = make_problem(n, N)
            lf = brute_force_tally(p, StrategyKind.LOCK_FIRST)
            kf = brute_force_tally(p, StrategyKind.KEY_FIRST)
            conv = exact_pmf_ordered(p)
            err = max(abs(lf.get(t, 0) / math.factorial(N) - conv(t)) for t in conv.support)
            print(f"{n:<2} {N:<2} {str(lf == kf):<14} {err:<12.2e}  {moments_ordered(p).mean}")


if __name__ == "__main__":
    main()
