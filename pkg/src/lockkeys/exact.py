"""Exact laws of the total trial count T, plus brute-force and recursion oracles."""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .analytic import per_lock_pmf_ordered
from .core import Keyring, Problem
from .pmf import Pmf, pmf_convolve
from .strategies import StrategyKind, play_key_first, play_lock_first

BRUTE_FORCE_MAX_KEYS = 9


@dataclass(frozen=True)
class TruncationPolicy:
    """Largest tail mass an unbounded PMF may drop."""

    epsilon: float = 1e-9

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon}")


def exact_pmf_ordered(problem: Problem) -> Pmf:
    """Convolution of Uniform{1..N-i+1}, i = 1..n, folded left to right."""
    out = Pmf.point(0)
    for i in range(1, problem.locks + 1):
        out = pmf_convolve(out, per_lock_pmf_ordered(problem, i))
    return out


def _geometric_head(p: float, length: int) -> np.ndarray:
    if p == 1.0:
        head = np.zeros(length)
        head[0] = 1.0
        return head
    return p * (1.0 - p) ** np.arange(length)


def exact_pmf_random(problem: Problem, policy: TruncationPolicy = TruncationPolicy()) -> Pmf:
    """Law of T under totally random play, truncated at ``1 - epsilon`` coverage.

    Each geometric X_i is cut to ``1..L``; since every X_i is at least 1, the
    convolved entries for ``T <= L + n - 1`` are then exact. ``L`` doubles
    until those entries carry ``1 - epsilon`` of the mass, and the result is
    trimmed to the shortest prefix that does.
    """
    n, N = problem.locks, problem.keys
    if n == 0:
        return Pmf.point(0)
    length = 64
    while True:
        mass = np.ones(1)
        for i in range(1, n + 1):
            mass = np.convolve(mass, _geometric_head(1.0 / (N - i + 1), length))
        # index j holds T = n + j; exact up to T = L + n - 1
        mass = mass[:length]
        cum = np.cumsum(mass)
        if cum[-1] >= 1.0 - policy.epsilon:
            stop = int(np.searchsorted(cum, 1.0 - policy.epsilon)) + 1
            mass = mass[:stop]
            deficit = max(0.0, 1.0 - float(mass.sum()))
            return Pmf(n, mass, deficit)
        length *= 2


def brute_force_tally(problem: Problem, strategy: StrategyKind) -> Counter:
    """Number of keyrings giving each total, over all N! keyrings."""
    if strategy is StrategyKind.TOTALLY_RANDOM:
        raise ValueError("brute force covers the keyring-driven strategies only")
    if problem.keys > BRUTE_FORCE_MAX_KEYS:
        raise ValueError(
            f"brute force is capped at {BRUTE_FORCE_MAX_KEYS} keys, got {problem.keys}"
        )
    player = play_lock_first if strategy is StrategyKind.LOCK_FIRST else play_key_first
    tally: Counter = Counter()
    for order in itertools.permutations(range(1, problem.keys + 1)):
        tally[player(problem, Keyring(order)).total] += 1
    return tally


def brute_force_pmf(problem: Problem, strategy: StrategyKind) -> Pmf:
    tally = brute_force_tally(problem, strategy)
    lo, hi = min(tally), max(tally)
    denom = math.factorial(problem.keys)
    mass = np.array([tally.get(t, 0) / denom for t in range(lo, hi + 1)])
    return Pmf(lo, mass)


def recursion_pmf_random(problem: Problem, t_max: int) -> Pmf:
    """P(T = t) for t <= t_max from the Markov chain on locks opened.

    State j (locks open) advances with probability 1/(N - j) per trial. The
    mass beyond ``t_max`` is recorded as the deficit.
    """
    n, N = problem.locks, problem.keys
    if t_max < n:
        raise ValueError(f"t_max must be at least n={n}")
    if n == 0:
        return Pmf.point(0)
    advance = np.array([1.0 / (N - j) for j in range(n)])
    state = np.zeros(n)
    state[0] = 1.0
    out = np.zeros(t_max + 1)
    for t in range(1, t_max + 1):
        moved = state * advance
        out[t] = moved[-1]
        nxt = state - moved
        nxt[1:] += moved[:-1]
        state = nxt
    mass = out[n:]
    return Pmf(n, mass, max(0.0, 1.0 - float(mass.sum())))
