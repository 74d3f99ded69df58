"""Dense integer-support probability mass functions."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Iterable, TextIO

import numpy as np

TOL_MASS = 1e-12


@dataclass(frozen=True)
class Pmf:
    """``mass[j]`` is the probability of ``offset + j``.

    ``deficit`` is the mass known to lie outside the stored support (nonzero
    only for truncated PMFs); stored mass must sum to ``1 - deficit``.
    """

    offset: int
    mass: np.ndarray
    deficit: float = 0.0

    def __post_init__(self):
        mass = np.array(self.mass, dtype=np.float64, copy=True).reshape(-1)
        if mass.size == 0:
            raise ValueError("Pmf needs at least one support point")
        if np.any(mass < 0) or not np.all(np.isfinite(mass)):
            raise ValueError("Pmf masses must be finite and nonnegative")
        if not 0.0 <= self.deficit < 1.0:
            raise ValueError(f"deficit must lie in [0, 1), got {self.deficit}")
        if abs(mass.sum() - (1.0 - self.deficit)) > TOL_MASS:
            raise ValueError(
                f"mass sums to {mass.sum()!r}, expected {1.0 - self.deficit!r} "
                f"within {TOL_MASS}"
            )
        mass.setflags(write=False)
        object.__setattr__(self, "mass", mass)
        object.__setattr__(self, "offset", int(self.offset))

    @classmethod
    def point(cls, value: int) -> "Pmf":
        return cls(value, np.ones(1))

    @classmethod
    def uniform(cls, lo: int, hi: int) -> "Pmf":
        """Uniform on the integers ``lo..hi`` inclusive."""
        if hi < lo:
            raise ValueError("empty range")
        m = hi - lo + 1
        return cls(lo, np.full(m, 1.0 / m))

    @property
    def support(self) -> np.ndarray:
        return np.arange(self.offset, self.offset + self.mass.size)

    @property
    def last(self) -> int:
        return self.offset + self.mass.size - 1

    @property
    def total(self) -> float:
        return float(self.mass.sum())

    def __call__(self, value: int) -> float:
        j = value - self.offset
        if 0 <= j < self.mass.size:
            return float(self.mass[j])
        return 0.0

    def cdf(self) -> np.ndarray:
        return np.cumsum(self.mass)

    def to_dict(self) -> dict[int, float]:
        return {int(v): float(p) for v, p in zip(self.support, self.mass)}

    def allclose(self, other: "Pmf", atol: float = TOL_MASS) -> bool:
        """Entrywise comparison over the union of supports."""
        lo = min(self.offset, other.offset)
        hi = max(self.last, other.last)
        a = np.zeros(hi - lo + 1)
        b = np.zeros(hi - lo + 1)
        a[self.offset - lo : self.last - lo + 1] = self.mass
        b[other.offset - lo : other.last - lo + 1] = other.mass
        return bool(np.max(np.abs(a - b)) <= atol)


def pmf_convolve(a: Pmf, b: Pmf) -> Pmf:
    """PMF of the sum of independent draws from ``a`` and ``b``."""
    mass = np.convolve(a.mass, b.mass)
    # complete mass multiplies: (1 - da)(1 - db)
    deficit = 1.0 - (1.0 - a.deficit) * (1.0 - b.deficit)
    return Pmf(a.offset + b.offset, mass, deficit)


def pmf_moments(p: Pmf, allow_truncated: bool = False) -> tuple[float, float]:
    """Mean and variance, ``sum k p(k)`` and ``sum k^2 p(k) - mean^2``.

    Truncated PMFs (deficit above ``TOL_MASS``) are refused unless
    ``allow_truncated`` is set; the moments are then those of the stored
    mass, not renormalised.
    """
    if p.deficit > TOL_MASS and not allow_truncated:
        raise ValueError(
            f"PMF is truncated (deficit {p.deficit:.3g}); pass allow_truncated=True"
        )
    k = p.support.astype(np.float64)
    mean = float(np.dot(k, p.mass))
    # centre before squaring to keep the variance accurate for large offsets
    c = k - mean
    var = float(np.dot(c * c, p.mass)) + (1.0 - p.total) * mean * mean
    return mean, max(var, 0.0)


def write_pmf_csv(p: Pmf, out: TextIO, comments: Iterable[str] = ()) -> None:
    for line in comments:
        out.write(f"# {line}\n")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["value", "probability"])
    for v, m in zip(p.support, p.mass):
        writer.writerow([int(v), format(float(m), ".17g")])


def read_pmf_csv(src: TextIO | str) -> Pmf:
    """Inverse of ``write_pmf_csv``; a ``truncation_deficit=`` comment is honoured."""
    if isinstance(src, str):
        src = io.StringIO(src)
    deficit = 0.0
    rows: list[tuple[int, float]] = []
    for line in src:
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line.lstrip("#").strip()
            if body.startswith("truncation_deficit="):
                deficit = float(body.split("=", 1)[1])
            continue
        if line.lower().startswith("value"):
            continue
        value, prob = line.split(",")
        rows.append((int(value), float(prob)))
    if not rows:
        raise ValueError("no PMF rows found")
    rows.sort()
    lo, hi = rows[0][0], rows[-1][0]
    mass = np.zeros(hi - lo + 1)
    for v, pr in rows:
        mass[v - lo] += pr
    return Pmf(lo, mass, deficit)
