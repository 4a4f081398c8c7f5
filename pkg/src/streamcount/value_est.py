"""Adjacency-list triangle estimators driven by a value-prediction oracle.

Two schemes: an exponential-random-variable tracker that keeps the globally
largest (prediction + beta) / Exp(1) keys under a shared budget and outputs
ln(2) times the median of per-copy maxima, and a multi-layer subsampler that
routes edges to dyadic levels by predicted magnitude and harvests medians of
repeated samples per level.
"""

from __future__ import annotations

import math
from collections.abc import Iterable
from dataclasses import dataclass

from .errors import StreamModelError, scaled_term
from .graph import AdjBlock, Edge, canonical_edge
from .oracles import ValueOracle
from .randkit import Rng, median

__all__ = [
    "ErvParams",
    "ErvResult",
    "run_erv",
    "LayerParams",
    "MultilayerResult",
    "run_multilayer",
]


@dataclass(frozen=True)
class ErvParams:
    """Copy count and global tracked-edge budget for the ERV scheme."""

    copies: int
    budget: int
    alpha: float = 1.0
    beta: float = 0.0
    k: float = 2.0
    epsilon: float = 0.2

    def __post_init__(self):
        if self.copies < 1:
            raise ValueError("need at least one copy")
        if self.budget < self.copies:
            raise ValueError("budget must be at least the number of copies")

    @classmethod
    def from_accuracy(
        cls,
        m: int,
        t_est: float,
        epsilon: float,
        alpha: float,
        beta: float,
        k: float = 2.0,
        *,
        c_copies: float = 50.0,
        c_budget: float = 4.0,
    ) -> "ErvParams":
        """Budget scaled as eps^-2 * log^2(k/eps) * (alpha + m*beta/t_est)."""
        if not 0.0 < epsilon <= 1.0:
            raise ValueError("epsilon must be in (0, 1]")
        copies = math.ceil(c_copies / (epsilon * epsilon))
        log_term = math.log(max(k / epsilon, 2.0)) ** 2
        budget = math.ceil(
            c_budget / (epsilon * epsilon) * log_term * (alpha + m * beta / t_est)
        )
        return cls(copies, max(budget, copies), alpha, beta, k, epsilon)


@dataclass(frozen=True)
class ErvResult:
    estimate: float
    peak_tracked: int
    copy_maxima: tuple[float, ...]


def run_erv(
    stream: Iterable[AdjBlock],
    voracle: ValueOracle,
    params: ErvParams,
    rng: Rng,
) -> ErvResult:
    """One adjacency-list pass of the ERV tracker.

    Each copy draws an independent Exp(1) variate per first-sighted edge and
    tracks the edge under the key (prediction + beta) / u.  After every block
    the lowest keys are evicted (never re-admitted) until the total tracked
    across copies fits the budget.  A tracked edge completing its second
    sighting updates its copy's running maximum with counter / u.
    """
    n_copies = params.copies
    tracked: list[dict[Edge, list]] = [{} for _ in range(n_copies)]  # e -> [key, u, C]
    maxima = [0.0] * n_copies
    arrived: set[int] = set()
    sightings: dict[Edge, int] = {}
    total = 0
    peak = 0

    for block in stream:
        v = block.vertex
        nv = set(block.neighbors)
        for copy in tracked:
            for e, entry in copy.items():
                if e[0] in nv and e[1] in nv:
                    entry[2] += 1

        for u in block.neighbors:
            e = canonical_edge(v, u)
            seen = sightings.get(e, 0) + 1
            if seen > 2:
                raise StreamModelError(f"edge {e} appeared more than twice")
            sightings[e] = seen
            if u in arrived:
                for i in range(n_copies):
                    entry = tracked[i].get(e)
                    if entry is not None:
                        value = entry[2] / entry[1]
                        if value > maxima[i]:
                            maxima[i] = value
            else:
                key_base = voracle.predict(e) + params.beta
                for copy in tracked:
                    u_var = rng.exp1()
                    copy[e] = [key_base / u_var, u_var, 0]
                total += n_copies

        arrived.add(v)
        if total > params.budget:
            entries = [
                (copy[e][0], i, e)
                for i, copy in enumerate(tracked)
                for e in copy
            ]
            entries.sort()
            for _, i, e in entries[: total - params.budget]:
                del tracked[i][e]
            total = params.budget
        peak = max(peak, total)

    if any(count != 2 for count in sightings.values()):
        raise StreamModelError("some edge appeared only once in the stream")

    estimate = math.log(2.0) * median(maxima)
    return ErvResult(estimate, peak, tuple(maxima))


@dataclass(frozen=True)
class LayerParams:
    """Dyadic magnitude levels with per-level sampling rates.

    Level i holds shifted predictions (value + beta) in [2^i * beta,
    2^(i+1) * beta), except level 0 which starts at 0; values beyond the top
    level are clamped into it.
    """

    beta: float
    levels: int
    repeats: int
    rates: tuple[float, ...]

    def __post_init__(self):
        if self.beta <= 0:
            raise ValueError("beta must be positive")
        if self.levels < 1 or self.repeats < 1:
            raise ValueError("need at least one level and one repeat")
        if len(self.rates) != self.levels:
            raise ValueError("one sampling rate per level required")
        if any(not 0.0 <= r <= 1.0 for r in self.rates):
            raise ValueError("rates must lie in [0, 1]")

    @classmethod
    def from_accuracy(
        cls,
        n: int,
        t_est: float,
        epsilon: float,
        beta: float,
        *,
        max_predicted: float | None = None,
        c: float = 4.0,
    ) -> "LayerParams":
        """Level count covers the predicted range; rates grow dyadically."""
        if beta <= 0:
            raise ValueError("beta must be positive")
        if not 0.0 < epsilon <= 1.0:
            raise ValueError("epsilon must be in (0, 1]")
        top = max(max_predicted if max_predicted is not None else t_est, beta)
        levels = max(1, math.ceil(math.log2(top / beta)) + 1)
        repeats = max(3, math.ceil(math.log2(max(math.log2(max(n, 2)), 1.0))))
        log2n = math.log2(max(n, 2))
        inv_eps2 = 1.0 / (epsilon * epsilon)
        rates = tuple(
            min(1.0, c * inv_eps2 * (2 ** (i + 1)) * beta * log2n * log2n / t_est)
            for i in range(levels)
        )
        return cls(beta, levels, repeats, rates)

    def level_of(self, shifted_value: float) -> int:
        """Level index of a shifted prediction (value + beta)."""
        if shifted_value < 2 * self.beta:
            return 0
        return min(int(math.log2(shifted_value / self.beta)), self.levels - 1)


@dataclass(frozen=True)
class MultilayerResult:
    estimate: float
    peak_tracked: int
    level_estimates: tuple[float, ...]


def run_multilayer(
    stream: Iterable[AdjBlock],
    voracle: ValueOracle,
    params: LayerParams,
    rng: Rng,
) -> MultilayerResult:
    """One adjacency-list pass of the multi-layer subsampler.

    First-sighted edges land in the level matching their shifted prediction
    and are sampled into each of the level's repeated sets independently;
    second sightings harvest the counters.  The estimate sums, per level, the
    median across repeats scaled by the level rate.
    """
    sets: list[list[dict[Edge, int]]] = [
        [{} for _ in range(params.repeats)] for _ in range(params.levels)
    ]
    accum = [[0 for _ in range(params.repeats)] for _ in range(params.levels)]
    arrived: set[int] = set()
    sightings: dict[Edge, int] = {}
    peak = 0

    for block in stream:
        v = block.vertex
        nv = set(block.neighbors)
        for level_sets in sets:
            for tracked in level_sets:
                for e in tracked:
                    if e[0] in nv and e[1] in nv:
                        tracked[e] += 1

        for u in block.neighbors:
            e = canonical_edge(v, u)
            seen = sightings.get(e, 0) + 1
            if seen > 2:
                raise StreamModelError(f"edge {e} appeared more than twice")
            sightings[e] = seen
            shifted = voracle.predict(e) + params.beta
            lvl = params.level_of(shifted)
            if u in arrived:
                for j, tracked in enumerate(sets[lvl]):
                    if e in tracked:
                        accum[lvl][j] += tracked[e]
            else:
                rate = params.rates[lvl]
                for tracked in sets[lvl]:
                    if rate > 0 and rng.bernoulli(rate):
                        tracked[e] = 0

        arrived.add(v)
        peak = max(
            peak,
            sum(len(t) for level_sets in sets for t in level_sets),
        )

    if any(count != 2 for count in sightings.values()):
        raise StreamModelError("some edge appeared only once in the stream")

    level_estimates = tuple(
        scaled_term(median(accum[i]), params.rates[i], f"level {i}")
        for i in range(params.levels)
    )
    return MultilayerResult(sum(level_estimates), peak, level_estimates)
