"""Closed-form moments, per-lock laws and the key-first marginal identity.

Moments are returned as exact ``Fraction`` values. The key-first variance for
N > n has no direct derivation; it is the lock-first variance, which applies
because both strategies spend the same number of trials on every keyring.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .core import Problem
from .pmf import Pmf


@dataclass(frozen=True)
class MomentPair:
    mean: Fraction
    variance: Fraction

    def __post_init__(self):
        if self.variance < 0:
            raise ValueError("variance must be nonnegative")


@dataclass(frozen=True)
class GammaParams:
    shape_k: float
    scale_theta: float

    def __post_init__(self):
        if not (self.shape_k > 0 and self.scale_theta > 0):
            raise ValueError(f"Gamma parameters must be positive: {self}")

    @property
    def mean(self) -> float:
        return self.shape_k * self.scale_theta

    @property
    def variance(self) -> float:
        return self.shape_k * self.scale_theta ** 2


def moments_random(problem: Problem) -> MomentPair:
    n, N = problem.locks, problem.keys
    mean = Fraction(n * (2 * N - n + 1), 2)
    var = Fraction(n * (3 * N * N - 3 * N * n + n * n - 1), 3)
    return MomentPair(mean, var)


def moments_ordered(problem: Problem) -> MomentPair:
    """Mean and variance of T for lock-first and key-first play."""
    n, N = problem.locks, problem.keys
    mean = Fraction(n * (2 * N + 3 - n), 4)
    var = Fraction(n * (6 * N * N - 6 * N * n + 6 * N + 2 * n * n - 3 * n - 5), 72)
    return MomentPair(mean, var)


def _check_lock_index(problem: Problem, i: int) -> None:
    if not 1 <= i <= problem.locks:
        raise ValueError(f"lock index {i} outside 1..{problem.locks}")


def geometric_success(problem: Problem, i: int) -> Fraction:
    """Per-trial success probability while opening the i-th lock at random."""
    _check_lock_index(problem, i)
    return Fraction(1, problem.keys - i + 1)


def geometric_pmf_value(problem: Problem, i: int, k: int) -> Fraction:
    """Exact P(X_i = k) for the totally random strategy."""
    p = geometric_success(problem, i)
    if k < 1:
        return Fraction(0)
    return (1 - p) ** (k - 1) * p


def per_lock_pmf_random(problem: Problem, i: int, length: int | None = None,
                        epsilon: float = 1e-9) -> Pmf:
    """Geometric law of X_i, materialised on ``1..length``.

    Without ``length`` the support grows until the tail beyond it is below
    ``epsilon``; the dropped mass is recorded as the PMF's deficit.
    """
    p = float(geometric_success(problem, i))
    q = 1.0 - p
    if q == 0.0:
        return Pmf.point(1)
    if length is None:
        length = max(1, math.ceil(math.log(epsilon) / math.log(q)))
    k = np.arange(length)
    mass = p * q ** k
    return Pmf(1, mass, deficit=q ** length)


def per_lock_pmf_ordered(problem: Problem, i: int) -> Pmf:
    """X_i is uniform on ``1..N-i+1`` under lock-first and key-first play."""
    _check_lock_index(problem, i)
    return Pmf.uniform(1, problem.keys - i + 1)


def per_lock_moments_ordered(problem: Problem, i: int) -> MomentPair:
    _check_lock_index(problem, i)
    N = problem.keys
    return MomentPair(Fraction(N + 2 - i, 2), Fraction((N + 2 - i) * (N - i), 12))


def per_lock_moments_random(problem: Problem, i: int) -> MomentPair:
    _check_lock_index(problem, i)
    N = problem.keys
    return MomentPair(Fraction(N - i + 1), Fraction((N - i) * (N - i + 1)))


def key_first_marginal(N: int, p: int, k: int) -> Fraction:
    """Exact P(X_p = k) for key-first play from the binomial sum over l.

    If ``l`` locks were opened before the p-th key that succeeds is reached,
    that key sits at ring position ``k + l``.
    """
    if not 1 <= p <= N:
        raise ValueError(f"p={p} outside 1..{N}")
    if not 1 <= k <= N - p + 1:
        raise ValueError(f"k={k} outside 1..{N - p + 1}")
    num = sum(
        math.comb(k + l - 1, l) * math.comb(N - k - l, p - 1 - l) for l in range(p)
    )
    return Fraction(num, N * math.comb(N - 1, p - 1))


@dataclass
class IdentityReport:
    max_keys: int
    checked: int = 0
    violations: list[tuple[int, int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "max_keys": self.max_keys,
            "checked": self.checked,
            "violations": len(self.violations),
            "failures": [list(v) for v in self.violations[:20]],
        }


def verify_chu_vandermonde(max_keys: int) -> IdentityReport:
    """Check ``key_first_marginal(N, p, k) == 1/(N-p+1)`` on every valid triple."""
    if max_keys < 1:
        raise ValueError("max_keys must be at least 1")
    report = IdentityReport(max_keys)
    for N in range(1, max_keys + 1):
        for p in range(1, N + 1):
            target = Fraction(1, N - p + 1)
            for k in range(1, N - p + 2):
                report.checked += 1
                if key_first_marginal(N, p, k) != target:
                    report.violations.append((N, p, k))
    return report


def gamma_match_random(problem: Problem) -> GammaParams:
    """Gamma shape/scale whose mean and variance equal those of random-strategy T."""
    n, N = problem.locks, problem.keys
    if n < 2:
        raise ValueError("Gamma matching needs at least 2 locks (positive variance)")
    quad = 3 * N * N - 3 * N * n + n * n - 1
    lin = 2 * N - n + 1
    k = Fraction(3 * n * lin * lin, 4 * quad)
    theta = Fraction(2 * quad, 3 * lin)
    target = moments_random(problem)
    if k * theta != target.mean or k * theta ** 2 != target.variance:
        raise ArithmeticError(f"Gamma parameters do not match the moments at {problem}")
    return GammaParams(float(k), float(theta))


def gamma_from_moments(mean: float, variance: float) -> GammaParams:
    if variance <= 0:
        raise ValueError("variance must be positive for a Gamma fit")
    if mean <= 0:
        raise ValueError("mean must be positive for a Gamma fit")
    return GammaParams(mean * mean / variance, variance / mean)
