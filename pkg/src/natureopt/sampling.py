"""Seeded random streams and Lévy-flight step sampling.

Every random number in the package comes from an :class:`RngStream`. The
underlying generator is NumPy's PCG64 (PCG XSL RR 128/64) seeded through
``SeedSequence``, so a given seed yields the same variates on every
platform and NumPy release that keeps the PCG64 stream stable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

Shape = Union[int, tuple[int, ...], None]

SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class LevyParams:
    """Exponent and scale of a power-law step distribution.

    ``lam`` is the tail exponent: densities fall off like ``s ** -(1 + lam)``.
    """

    lam: float = 1.5
    scale: float = 1.0

    def __post_init__(self) -> None:
        if not 1.0 < self.lam < 3.0:
            raise ValueError(f"Levy exponent must lie in (1, 3), got {self.lam}")
        if not self.scale >= 0.0:
            raise ValueError("Levy scale must be non-negative")


def mantegna_sigma(lam: float) -> float:
    """Standard deviation of the numerator Gaussian in Mantegna's ratio.

    Defined for ``lam < 2``; at ``lam >= 2`` the sine factor is non-positive
    and the ratio is used unnormalized (sigma = 1), which leaves the tail
    exponent unchanged.
    """
    if lam >= 2.0:
        return 1.0
    num = math.gamma(1.0 + lam) * math.sin(math.pi * lam / 2.0)
    den = math.gamma((1.0 + lam) / 2.0) * lam * 2.0 ** ((lam - 1.0) / 2.0)
    return (num / den) ** (1.0 / lam)


class RngStream:
    """Deterministic random source.

    Args:
        seed: Unsigned 64-bit seed.
        key: Spawn path identifying a child stream; empty for a root stream.
    """

    def __init__(self, seed: int, key: tuple[int, ...] = ()) -> None:
        if not 0 <= int(seed) <= SEED_MASK:
            raise ValueError("seed must be an unsigned 64-bit integer")
        self.seed = int(seed)
        self.key = tuple(int(k) for k in key)
        ss = np.random.SeedSequence(self.seed, spawn_key=self.key)
        self._gen = np.random.Generator(np.random.PCG64(ss))

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, key={self.key})"

    def spawn(self, *index: int) -> "RngStream":
        """Child stream determined only by ``(seed, key + index)``.

        Spawning does not consume variates from this stream.
        """
        return RngStream(self.seed, self.key + tuple(index))

    def child_seed(self, index: int) -> int:
        """A 64-bit integer seed derived from ``(seed, key + (index,))``."""
        ss = np.random.SeedSequence(self.seed, spawn_key=self.key + (int(index),))
        return int(ss.generate_state(1, dtype=np.uint64)[0])

    # Raw variates. One 64-bit draw per uniform double.

    def random(self, size: Shape = None):
        """Uniform variates on [0, 1)."""
        return self._gen.random(size)

    def uniform(self, lo: float = 0.0, hi: float = 1.0, size: Shape = None):
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi})")
        u = self._gen.random(size)
        if lo == hi:
            return np.full(size, float(lo)) if size is not None else float(lo)
        return lo + (hi - lo) * u

    def normal(self, size: Shape = None):
        """Standard normal variates (ziggurat)."""
        return self._gen.standard_normal(size)

    def integers(self, high: int, size: Shape = None):
        """Uniform integers on ``[0, high)``."""
        return self._gen.integers(0, high, size=size)

    def permutation(self, n: int) -> np.ndarray:
        return self._gen.permutation(n)

    def levy(self, params: LevyParams, size: Shape = None):
        """Heavy-tailed symmetric steps via Mantegna's ratio.

        The magnitude ``|u| / |v| ** (1/lam)`` with ``u ~ N(0, sigma^2)`` and
        ``v ~ N(0, 1)`` has a survival function decaying like ``s ** -lam``.
        The sign is an independent fair coin.
        """
        lam = params.lam
        u = self._gen.standard_normal(size) * mantegna_sigma(lam)
        v = self._gen.standard_normal(size)
        coin = self._gen.random(size)
        magnitude = np.abs(u) / np.abs(v) ** (1.0 / lam)
        sign = np.where(coin < 0.5, -1.0, 1.0)
        step = params.scale * sign * magnitude
        return float(step) if size is None else step


def uniform(rng: RngStream, lo: float, hi: float) -> float:
    return rng.uniform(lo, hi)


def gaussian(rng: RngStream) -> float:
    return float(rng.normal())


def levy_step(rng: RngStream, params: Optional[LevyParams] = None) -> float:
    return rng.levy(params or LevyParams())


def levy_tail_density(s: float, params: LevyParams) -> float:
    """Asymptotic power-law density ``lam*Gamma(lam)*sin(pi*lam/2)/pi * s**-(1+lam)``.

    Only meaningful for large ``s``; used to check the sampler's tail.
    """
    if not s > 0:
        raise ValueError("tail density is defined for s > 0")
    lam = params.lam
    const = lam * math.gamma(lam) * math.sin(math.pi * lam / 2.0) / math.pi
    return const * s ** -(1.0 + lam)


def hill_estimator(samples: np.ndarray, tail_fraction: float = 0.01) -> float:
    """Hill estimate of the survival-function tail index from the top order statistics."""
    x = np.sort(np.abs(np.asarray(samples, dtype=float)))[::-1]
    k = max(2, int(len(x) * tail_fraction))
    top = x[: k + 1]
    return 1.0 / float(np.mean(np.log(top[:k]) - np.log(top[k])))


def ccdf_slope(samples: np.ndarray, lo: float, hi: float, points: int = 30) -> float:
    """Least-squares slope of log P(|X| > s) against log s on ``[lo, hi]``."""
    x = np.sort(np.abs(np.asarray(samples, dtype=float)))
    grid = np.geomspace(lo, hi, points)
    surv = 1.0 - np.searchsorted(x, grid, side="right") / len(x)
    keep = surv > 0
    slope, _ = np.polyfit(np.log(grid[keep]), np.log(surv[keep]), 1)
    return float(slope)
