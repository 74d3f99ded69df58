"""The three opening strategies, played on single keyrings or in batches.

Locks are attacked in label order. The deterministic players take a keyring;
the totally random player only needs a random stream.
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from .core import Keyring, Problem, RngStream, TrialTrace


class StrategyKind(Enum):
    TOTALLY_RANDOM = "random"
    LOCK_FIRST = "lock-first"
    KEY_FIRST = "key-first"

    @property
    def ordered(self) -> bool:
        return self is not StrategyKind.TOTALLY_RANDOM


def _check_ring(problem: Problem, ring: Keyring) -> None:
    if len(ring) != problem.keys:
        raise ValueError(f"keyring has {len(ring)} keys, problem has {problem.keys}")


def play_lock_first(problem: Problem, ring: Keyring) -> TrialTrace:
    """Take lock 1, sweep the remaining keys in ring order, repeat."""
    _check_ring(problem, ring)
    remaining = list(ring.order)
    counts = []
    for lock in range(1, problem.locks + 1):
        pos = remaining.index(lock)
        counts.append(pos + 1)
        del remaining[pos]
    return TrialTrace.from_counts(counts)


def play_key_first(problem: Problem, ring: Keyring, charge: str = "lock") -> TrialTrace:
    """Take keys in ring order and try each on the remaining locks.

    A key is tried on the closed locks in label order until it opens one or
    runs out. With ``charge="lock"`` (default) ``per_lock[i-1]`` counts the
    trials made on lock i; these marginals are Uniform{1..N-i+1}. With
    ``charge="interval"`` it counts trials between consecutive openings,
    blank-key trials going to the next opening; for N > n those marginals
    are not uniform. The total is the same either way.
    """
    if charge not in ("lock", "interval"):
        raise ValueError(f"unknown charge convention {charge!r}")
    _check_ring(problem, ring)
    n = problem.locks
    closed = list(range(1, n + 1))
    on_lock = [0] * n
    intervals = []
    pending = 0
    for key in ring.order:
        if not closed:
            break
        # the key fails on every closed lock before its own (all of them if blank)
        tried = closed[: closed.index(key) + 1] if key <= n else list(closed)
        for lock in tried:
            on_lock[lock - 1] += 1
        pending += len(tried)
        if key <= n:
            intervals.append(pending)
            pending = 0
            closed.remove(key)
    return TrialTrace.from_counts(on_lock if charge == "lock" else intervals)


def play_totally_random(problem: Problem, rng: RngStream) -> TrialTrace:
    """Memoryless play: a random remaining key in a random remaining lock.

    With ``r`` keys left the pairing succeeds with probability exactly
    ``1/r``; each trial is one unbiased draw in ``[0, r)`` with 0 as success.
    """
    counts = []
    for i in range(1, problem.locks + 1):
        remaining = problem.keys - i + 1
        trials = 1
        while rng.bounded(remaining) != 0:
            trials += 1
        counts.append(trials)
    return TrialTrace.from_counts(counts)


def play(problem: Problem, kind: StrategyKind, ring: Keyring | None = None,
         rng: RngStream | None = None) -> TrialTrace:
    if kind is StrategyKind.TOTALLY_RANDOM:
        if rng is None:
            raise ValueError("the random strategy needs an rng")
        return play_totally_random(problem, rng)
    if ring is None:
        raise ValueError(f"{kind.value} needs a keyring")
    if kind is StrategyKind.LOCK_FIRST:
        return play_lock_first(problem, ring)
    return play_key_first(problem, ring)


def equivalent_on(problem: Problem, ring: Keyring) -> bool:
    return play_lock_first(problem, ring).total == play_key_first(problem, ring).total


# -- batch players -----------------------------------------------------------
# Same rules as the scalar players, stepped in lockstep across many games.


def _as_batch(problem: Problem, rings) -> np.ndarray:
    rings = np.asarray(rings, dtype=np.int64)
    if rings.ndim != 2 or rings.shape[1] != problem.keys:
        raise ValueError(f"expected a (games, {problem.keys}) array of keyrings")
    return rings


def batch_lock_first(problem: Problem, rings) -> np.ndarray:
    """Totals of lock-first play for each row of ``rings``."""
    rings = _as_batch(problem, rings)
    m = rings.shape[0]
    total = np.zeros(m, dtype=np.int64)
    present = np.ones(rings.shape, dtype=bool)
    cols = np.arange(problem.keys)
    rows = np.arange(m)
    for lock in range(1, problem.locks + 1):
        pos = np.argmax(rings == lock, axis=1)
        # keys still on the ring up to and including the right one
        total += np.sum(present & (cols <= pos[:, None]), axis=1)
        present[rows, pos] = False
    return total


def batch_key_first(problem: Problem, rings) -> np.ndarray:
    """Totals of key-first play for each row of ``rings``."""
    rings = _as_batch(problem, rings)
    n = problem.locks
    m = rings.shape[0]
    total = np.zeros(m, dtype=np.int64)
    closed = np.ones((m, n), dtype=bool)
    left = np.full(m, n, dtype=np.int64)
    rows = np.arange(m)
    for col in range(problem.keys):
        key = rings[:, col]
        live = left > 0
        if not live.any():
            break
        useful = live & (key <= n)
        blank = live & (key > n)
        total[blank] += left[blank]
        if useful.any():
            r = rows[useful]
            lock_idx = key[useful] - 1
            # closed locks with label <= key's label, the last being its own lock
            before = np.cumsum(closed[r], axis=1)
            total[r] += before[np.arange(r.size), lock_idx]
            closed[r, lock_idx] = False
            left[r] -= 1
    return total


def batch_totally_random(problem: Problem, games: int, rng: RngStream) -> np.ndarray:
    """Totals of ``games`` independent totally random plays, trial by trial."""
    n, big_n = problem.locks, problem.keys
    total = np.zeros(games, dtype=np.int64)
    opened = np.zeros(games, dtype=np.int64)
    active = np.arange(games) if n > 0 else np.arange(0)
    while active.size:
        remaining = big_n - opened[active]
        hit = rng.bounded_array(remaining) == 0
        total[active] += 1
        opened[active[hit]] += 1
        active = active[opened[active] < n]
    return total
