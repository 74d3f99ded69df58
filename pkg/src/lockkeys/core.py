"""Problem instances, keyrings, trial traces and the seeded random stream.

Key labels follow one convention everywhere: labels ``1..n`` open the lock
with the same label, labels ``n+1..N`` are blanks that open nothing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

_TWO64 = 1 << 64


@dataclass(frozen=True)
class Problem:
    """An instance with ``locks`` locks and ``keys`` keys on the ring."""

    locks: int
    keys: int

    def __post_init__(self):
        for name in ("locks", "keys"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise TypeError(f"{name} must be an integer, got {value!r}")
            if value < 0:
                raise ValueError(f"{name} must be nonnegative, got {value}")
        if self.locks > self.keys:
            raise ValueError(
                f"locks ({self.locks}) exceeds keys ({self.keys}): "
                "every lock needs its key on the ring"
            )
        object.__setattr__(self, "locks", int(self.locks))
        object.__setattr__(self, "keys", int(self.keys))


def make_problem(locks: int, keys: int) -> Problem:
    return Problem(locks, keys)


@dataclass(frozen=True)
class Keyring:
    """Key labels in ring order; ``order[i]`` is the label of the (i+1)-th key."""

    order: tuple[int, ...]

    def __post_init__(self):
        order = tuple(int(v) for v in self.order)
        if sorted(order) != list(range(1, len(order) + 1)):
            raise ValueError(f"keyring {order} is not a permutation of 1..{len(order)}")
        object.__setattr__(self, "order", order)

    def __len__(self) -> int:
        return len(self.order)

    def __iter__(self):
        return iter(self.order)


@dataclass(frozen=True)
class TrialTrace:
    """Total trial count and the per-opening counts X_1..X_n."""

    total: int
    per_lock: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "per_lock", tuple(int(x) for x in self.per_lock))
        if any(x < 1 for x in self.per_lock):
            raise ValueError(f"per-lock counts must be positive: {self.per_lock}")
        if self.total != sum(self.per_lock):
            raise ValueError(f"total {self.total} != sum of per-lock counts {self.per_lock}")

    @classmethod
    def from_counts(cls, counts: Sequence[int]) -> "TrialTrace":
        return cls(sum(counts), tuple(counts))


class RngStream:
    """Seeded source of 64-bit words with deterministic child streams.

    A stream is identified by ``(seed, path)``; ``split(i)`` appends ``i`` to
    the path. Two streams with the same identity yield the same words.
    Backed by numpy's PCG64 keyed through ``SeedSequence``.
    """

    def __init__(self, seed: int, path: tuple[int, ...] = ()):
        if seed < 0:
            raise ValueError("seed must be nonnegative")
        self.seed = int(seed)
        self.path = tuple(int(i) for i in path)
        seq = np.random.SeedSequence(entropy=self.seed, spawn_key=self.path)
        self._bitgen = np.random.PCG64(seq)

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, path={self.path})"

    def split(self, index: int) -> "RngStream":
        return RngStream(self.seed, self.path + (index,))

    def words(self, size: int | None = None):
        """Raw uint64 output; a Python int when ``size`` is None."""
        if size is None:
            return int(self._bitgen.random_raw())
        return self._bitgen.random_raw(size).astype(np.uint64, copy=False)

    def bounded(self, bound: int) -> int:
        """Uniform integer in ``[0, bound)`` by rejection, exactly unbiased."""
        if bound < 1:
            raise ValueError("bound must be positive")
        limit = _TWO64 - (_TWO64 % bound)
        while True:
            w = self.words()
            if w < limit:
                return w % bound

    def bounded_array(self, bounds) -> np.ndarray:
        """Vectorised ``bounded``: one draw per entry of ``bounds``.

        Rejected words are redrawn for the affected entries only, in index
        order, so the result is a deterministic function of the stream.
        """
        bounds = np.asarray(bounds, dtype=np.uint64)
        if bounds.size and bounds.min() < 1:
            raise ValueError("bounds must be positive")
        # 2**64 mod b, computed in wrapping uint64 arithmetic
        rem = (np.uint64(0) - bounds) % bounds
        out = np.empty(bounds.shape, dtype=np.uint64)
        pending = np.arange(bounds.size)
        flat_b = bounds.reshape(-1)
        flat_rem = rem.reshape(-1)
        flat_out = out.reshape(-1)
        while pending.size:
            w = self.words(pending.size)
            b = flat_b[pending]
            # accept iff w < 2**64 - rem, i.e. w <= ~rem  (rem == 0 accepts all)
            ok = (flat_rem[pending] == 0) | (w < (np.uint64(0) - flat_rem[pending]))
            flat_out[pending[ok]] = w[ok] % b[ok]
            pending = pending[~ok]
        return out.astype(np.int64)

    def uniform(self) -> float:
        """Float in [0, 1) with 53 random bits."""
        return (self.words() >> 11) * (1.0 / (1 << 53))


def random_keyring(keys: int, rng: RngStream) -> Keyring:
    """Uniform random keyring via Fisher-Yates over rejection-sampled indices."""
    if keys < 0:
        raise ValueError("keys must be nonnegative")
    order = list(range(1, keys + 1))
    for i in range(keys - 1, 0, -1):
        j = rng.bounded(i + 1)
        order[i], order[j] = order[j], order[i]
    return Keyring(tuple(order))


def random_keyrings(keys: int, count: int, rng: RngStream) -> np.ndarray:
    """``count`` independent uniform keyrings as a ``(count, keys)`` int array.

    Same Fisher-Yates sweep as ``random_keyring``, run column-wise over all
    rows at once.
    """
    rings = np.tile(np.arange(1, keys + 1, dtype=np.int64), (count, 1))
    rows = np.arange(count)
    for i in range(keys - 1, 0, -1):
        j = rng.bounded_array(np.full(count, i + 1))
        tmp = rings[rows, i].copy()
        rings[rows, i] = rings[rows, j]
        rings[rows, j] = tmp
    return rings
