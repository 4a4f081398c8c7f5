"""Heavy-edge oracles and value predictors.

A heavy oracle answers heavy/light for an edge; a value oracle returns a
numeric heaviness estimate.  Both cache their answer per edge for the
duration of a pass, so the two sightings of an edge in the adjacency-list
model always agree.  Noisy oracles draw their randomness from the trial's
:class:`~streamcount.randkit.Rng`, keeping whole experiments reproducible.

Conventions: thresholds on triangle-per-edge counts (N-style) are strict
(heavy iff score > rho); thresholds on middle-vertex counts (R-style, used
by the adjacency-list estimator) are inclusive (heavy iff score >= theta).
"""

from __future__ import annotations

import math
from collections.abc import Callable, Mapping
from dataclasses import dataclass

from .graph import Edge, Graph, VertexOrder, per_edge_triangle_count
from .randkit import Rng

__all__ = [
    "HeavyOracle",
    "ValueOracle",
    "PredictorTable",
    "perfect_oracle",
    "k_noisy_oracle",
    "k_noisy_heavy_probability",
    "flip_noise_oracle",
    "value_oracle_exp_tail",
    "value_oracle_linear_tail",
    "EXP_TAIL_K",
    "LINEAR_TAIL_K",
    "LINEAR_TAIL_W_MAX",
    "linear_tail_multiplier_tail",
    "snapshot_predictor",
    "prefix_predictor",
    "first_pass_oracle",
    "constant_oracle",
]


class HeavyOracle:
    """Heavy/light verdicts with per-pass caching.

    ``query`` returns True for heavy.  ``space_cost`` is the number of edges
    the oracle itself stores (nonzero only for the first-pass oracle).
    """

    def __init__(self, decide: Callable[[Edge], bool], name: str, space_cost: int = 0):
        self._decide = decide
        self.name = name
        self.space_cost = space_cost
        self._cache: dict[Edge, bool] = {}

    def query(self, edge: Edge) -> bool:
        verdict = self._cache.get(edge)
        if verdict is None:
            verdict = self._decide(edge)
            self._cache[edge] = verdict
        return verdict

    def reset(self) -> None:
        """Forget cached verdicts (call between passes, never within one)."""
        self._cache.clear()

    def __repr__(self) -> str:  # pragma: no cover
        return f"HeavyOracle({self.name})"


class ValueOracle:
    """Numeric heaviness estimates with per-pass caching."""

    def __init__(self, draw: Callable[[Edge], float], name: str):
        self._draw = draw
        self.name = name
        self._cache: dict[Edge, float] = {}

    def predict(self, edge: Edge) -> float:
        value = self._cache.get(edge)
        if value is None:
            value = self._draw(edge)
            self._cache[edge] = value
        return value

    def reset(self) -> None:
        self._cache.clear()

    def __repr__(self) -> str:  # pragma: no cover
        return f"ValueOracle({self.name})"


# ---------------------------------------------------------------------------
# Threshold oracles over a ground-truth (or predicted) score table
# ---------------------------------------------------------------------------


def _score_fn(scores: Mapping[Edge, float]) -> Callable[[Edge], float]:
    return lambda edge: scores.get(edge, 0.0)


def perfect_oracle(
    scores: Mapping[Edge, float], rho: float, *, strict: bool = True
) -> HeavyOracle:
    """Exact threshold verdicts; edges missing from the table score 0."""
    get = _score_fn(scores)
    if strict:
        return HeavyOracle(lambda e: get(e) > rho, f"perfect(rho={rho})")
    return HeavyOracle(lambda e: get(e) >= rho, f"perfect(rho>={rho})")


def k_noisy_heavy_probability(score: float, rho: float) -> float:
    """Heavy probability of the simulated noisy oracle: s^2 / (s^2 + rho^2).

    Sits inside [1 - rho/s, s/rho] for every s, rho > 0 (both sides reduce
    to s*rho <= s^2 + rho^2), so the simulation is 1-noisy.
    """
    if score <= 0:
        return 0.0
    return score * score / (score * score + rho * rho)


def k_noisy_oracle(scores: Mapping[Edge, float], rho: float, rng: Rng) -> HeavyOracle:
    """Noisy threshold oracle: confident far from rho, uncertain near it."""
    if rho <= 0:
        raise ValueError("threshold must be positive")
    get = _score_fn(scores)
    return HeavyOracle(
        lambda e: rng.bernoulli(k_noisy_heavy_probability(get(e), rho)),
        f"k_noisy(rho={rho})",
    )


def flip_noise_oracle(
    scores: Mapping[Edge, float],
    rho: float,
    delta: float,
    rng: Rng,
    *,
    strict: bool = True,
) -> HeavyOracle:
    """Perfect verdict, flipped independently with probability delta."""
    if not 0.0 <= delta <= 1.0:
        raise ValueError("flip probability must be in [0, 1]")
    get = _score_fn(scores)

    def decide(e: Edge) -> bool:
        truth = get(e) > rho if strict else get(e) >= rho
        return (not truth) if rng.bernoulli(delta) else truth

    return HeavyOracle(decide, f"flip(rho={rho},delta={delta})")


def constant_oracle(heavy: bool) -> HeavyOracle:
    """Labels every edge the same way; useful for saturation tests."""
    return HeavyOracle(lambda e: heavy, f"constant({'heavy' if heavy else 'light'})")


# ---------------------------------------------------------------------------
# Value-prediction oracles
# ---------------------------------------------------------------------------

# Smallest K for which the exp-tail member provably satisfies its family
# bound at every lambda >= 1 (the binding case is lambda -> 1).
EXP_TAIL_K = math.e

# The linear-tail multiplier W is a truncated Pareto on [1/2, W_MAX] with
# density proportional to 1/w^2; K = 2 conservatively covers both tails.
LINEAR_TAIL_W_MAX = 100.0
LINEAR_TAIL_K = 2.0
_LIN_NORM = 1.0 / (2.0 - 1.0 / LINEAR_TAIL_W_MAX)


def value_oracle_exp_tail(
    scores: Mapping[Edge, float],
    alpha: float,
    beta: float,
    rng: Rng | None,
    *,
    noiseless: bool = False,
) -> ValueOracle:
    """Member of the family with expectation bound and exponential lower tail.

    Emits alpha*R*U + beta*V with U ~ Uniform[1/2, 1] and V ~ Uniform[0, 1]:
    the mean is at most alpha*R + beta and there is no mass below R/2 - beta,
    so the family constraints hold with K = EXP_TAIL_K.  ``noiseless`` pins
    U = 1, V = 0.
    """
    if alpha < 1 or beta < 0:
        raise ValueError("need alpha >= 1 and beta >= 0")
    get = _score_fn(scores)
    if noiseless:
        return ValueOracle(lambda e: alpha * get(e), f"value_exp(a={alpha},b={beta},exact)")
    if rng is None:
        raise ValueError("rng required unless noiseless")

    def draw(e: Edge) -> float:
        u = 0.5 + 0.5 * rng.uniform()
        v = rng.uniform()
        return alpha * get(e) * u + beta * v

    return ValueOracle(draw, f"value_exp(a={alpha},b={beta})")


def linear_tail_multiplier_tail(lam: float) -> float:
    """Exact Pr[W > lam] for the truncated-Pareto multiplier."""
    if lam <= 0.5:
        return 1.0
    if lam >= LINEAR_TAIL_W_MAX:
        return 0.0
    return _LIN_NORM * (1.0 / lam - 1.0 / LINEAR_TAIL_W_MAX)


def value_oracle_linear_tail(
    scores: Mapping[Edge, float],
    alpha: float,
    beta: float,
    rng: Rng | None,
    *,
    noiseless: bool = False,
) -> ValueOracle:
    """Member of the family with linear tails on both sides.

    Emits alpha*R*W + beta where W is a truncated Pareto on [1/2, 100] with
    density proportional to 1/w^2; Pr[W > lam] <= LINEAR_TAIL_K / lam and the
    lower tail vanishes for lam >= 2.  ``noiseless`` pins W = 1.
    """
    if alpha < 1 or beta < 0:
        raise ValueError("need alpha >= 1 and beta >= 0")
    get = _score_fn(scores)
    if noiseless:
        return ValueOracle(
            lambda e: alpha * get(e) + beta, f"value_lin(a={alpha},b={beta},exact)"
        )
    if rng is None:
        raise ValueError("rng required unless noiseless")

    def draw(e: Edge) -> float:
        # Inverse-CDF sample: F(w) = _LIN_NORM * (2 - 1/w) on [1/2, W_MAX).
        u = rng.uniform()
        w = 1.0 / (2.0 - u / _LIN_NORM)
        return alpha * get(e) * w + beta

    return ValueOracle(draw, f"value_lin(a={alpha},b={beta})")


# ---------------------------------------------------------------------------
# Trained-table predictors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PredictorTable:
    """Static edge-score lookup; unseen edges predict 0.

    Immutable and shareable across concurrent trials; threshold and value
    views are cheap to mint per trial.
    """

    scores: Mapping[Edge, float]

    def score(self, edge: Edge) -> float:
        return self.scores.get(edge, 0.0)

    def heavy_oracle(self, rho: float, *, strict: bool = True) -> HeavyOracle:
        return perfect_oracle(self.scores, rho, strict=strict)

    def value_oracle(self) -> ValueOracle:
        return ValueOracle(self.score, "predictor_table")

    def __len__(self) -> int:
        return len(self.scores)


def snapshot_predictor(training: Graph, keep_fraction: float) -> PredictorTable:
    """Remember the heaviest edges of an earlier graph in a sequence.

    Computes per-edge triangle counts on the training graph and keeps the
    top ceil(keep_fraction * m) of them (ties broken by canonical edge
    order); later queries fall back to 0 for unseen edges.
    """
    if not 0.0 < keep_fraction <= 1.0:
        raise ValueError("keep_fraction must be in (0, 1]")
    if training.m == 0:
        raise ValueError("empty training graph")
    counts = per_edge_triangle_count(training)
    keep = math.ceil(keep_fraction * training.m)
    ranked = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
    return PredictorTable(dict(ranked[:keep]))


def prefix_predictor(
    graph: Graph, timestamps: Mapping[Edge, float] | None, split: float
) -> PredictorTable:
    """Exact counts on the earliest split-fraction of a temporal edge set."""
    if timestamps is None:
        raise ValueError("prefix predictor needs edge timestamps")
    if not 0.0 < split < 1.0:
        raise ValueError("split must be in (0, 1)")
    missing = [e for e in graph.edges if e not in timestamps]
    if missing:
        raise ValueError(f"{len(missing)} edges lack timestamps")
    ordered = sorted(graph.edges, key=lambda e: (timestamps[e], e))
    prefix = ordered[: math.ceil(split * graph.m)]
    sub = Graph(graph.n, prefix)
    return PredictorTable(per_edge_triangle_count(sub))


def first_pass_oracle(
    g: Graph, rho: float, eps: float, rng: Rng, *, c: float = 4.0
) -> HeavyOracle:
    """Node-sampling oracle in the style of a dedicated first pass.

    Samples each node with probability p = min(1, c * eps^-2 * ln(m) / rho),
    keeps all incident edges, and calls an edge heavy when the number of
    sampled common neighbors reaches p * rho.  ``space_cost`` reports the
    number of stored edges.
    """
    if rho <= 0:
        raise ValueError("threshold must be positive")
    if not 0.0 < eps <= 1.0:
        raise ValueError("eps must be in (0, 1]")
    p = min(1.0, c * math.log(max(g.m, 2)) / (eps * eps * rho))
    sampled = frozenset(v for v in range(g.n) if rng.bernoulli(p))
    stored_edges = {
        e for v in sampled for e in ((min(v, w), max(v, w)) for w in g.neighbors(v))
    }

    def decide(e: Edge) -> bool:
        u, v = e
        hits = sum(1 for z in g.neighbor_set(u) & g.neighbor_set(v) if z in sampled)
        return hits >= p * rho

    return HeavyOracle(
        decide, f"first_pass(rho={rho},p={p:.4g})", space_cost=len(stored_edges)
    )
