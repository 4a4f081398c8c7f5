"""Seeded randomness, exponential variates, and the median combiner.

All estimator randomness flows through :class:`Rng` so that a master seed
fully determines every trial.  Parallel trials derive independent children
via :meth:`Rng.split`, which extends the PCG64 spawn key with the trial
indices (documented split function: child k of seed s is
``SeedSequence(entropy=s, spawn_key=parent_key + (k,))``).
"""

from __future__ import annotations

import math
import warnings
from collections.abc import Sequence

import numpy as np
from scipy import stats

__all__ = ["Rng", "median", "max_stability_check"]

# Uniform draws are prefetched in fixed-size blocks; changing this constant
# would change the interleaving of scalar and vector draws.
_BLOCK = 1024


class Rng:
    """Deterministic PCG64-backed generator with cheap scalar draws.

    Scalar uniforms come from an internal prefetched block, which makes the
    per-edge coin flips in the streaming passes fast while keeping the draw
    sequence a pure function of the seed.
    """

    __slots__ = ("_entropy", "_spawn_key", "_gen", "_buf", "_pos")

    def __init__(self, seed: int = 42, _spawn_key: tuple[int, ...] = ()):
        self._entropy = int(seed)
        self._spawn_key = _spawn_key
        self._gen = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence(self._entropy, spawn_key=_spawn_key))
        )
        self._buf = self._gen.random(_BLOCK)
        self._pos = 0

    def split(self, *key: int) -> "Rng":
        """Independent child generator for (master seed, *key)."""
        return Rng(self._entropy, self._spawn_key + tuple(int(k) for k in key))

    # -- scalar draws -------------------------------------------------------

    def uniform(self) -> float:
        """One uniform draw from [0, 1)."""
        if self._pos >= _BLOCK:
            self._buf = self._gen.random(_BLOCK)
            self._pos = 0
        u = self._buf[self._pos]
        self._pos += 1
        return float(u)

    def bernoulli(self, p: float) -> bool:
        """True with probability p; out-of-range p is clamped with a warning."""
        if math.isnan(p):
            raise ValueError("bernoulli probability is NaN")
        if p < 0.0 or p > 1.0:
            warnings.warn(f"bernoulli probability {p} clamped to [0, 1]", stacklevel=2)
            p = min(1.0, max(0.0, p))
        if p >= 1.0:
            return True
        if p <= 0.0:
            return False
        return self.uniform() < p

    def exp1(self) -> float:
        """Standard exponential variate, computed as -ln(U) with U in (0, 1]."""
        while True:
            value = -math.log(1.0 - self.uniform())
            if value > 0.0:  # guards against the measure-zero draw U == 1
                return value

    def integers(self, low: int, high: int) -> int:
        """Uniform integer in [low, high)."""
        if high <= low:
            raise ValueError("empty integer range")
        return low + int(self.uniform() * (high - low))

    def choice_index(self, n: int) -> int:
        return self.integers(0, n)

    # -- vectorized draws (consume the generator directly) ------------------

    def uniform_array(self, size: int) -> np.ndarray:
        return self._gen.random(size)

    def exp1_array(self, size: int) -> np.ndarray:
        return -np.log1p(-self._gen.random(size))

    def shuffle(self, seq: list) -> None:
        """In-place Fisher-Yates shuffle."""
        self._gen.shuffle(seq)

    @property
    def generator(self) -> np.random.Generator:
        return self._gen


def median(values: Sequence[float]) -> float:
    """Lower median: for even lengths the smaller of the two middle values."""
    if len(values) == 0:
        raise ValueError("median of empty list")
    ordered = sorted(values)
    return ordered[(len(ordered) - 1) // 2]


def max_stability_check(x: Sequence[float], trials: int, rng: Rng) -> float:
    """Two-sample KS statistic comparing max_i(x_i/u_i) against (sum x)/u.

    The two samples are identically distributed when the u are independent
    standard exponentials, so the statistic should be small.  Test helper.
    """
    xs = np.asarray(list(x), dtype=float)
    if xs.size == 0 or np.any(xs <= 0):
        raise ValueError("all inputs must be positive")
    if trials < 1000:
        raise ValueError("need at least 1000 trials for a meaningful statistic")
    u = rng.exp1_array(trials * xs.size).reshape(trials, xs.size)
    sample_max = (xs[None, :] / u).max(axis=1)
    sample_sum = xs.sum() / rng.exp1_array(trials)
    return float(stats.ks_2samp(sample_max, sample_sum).statistic)
