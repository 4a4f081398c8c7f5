"""One-pass triangle counting in the adjacency-list model.

Edges are split into light / medium / heavy strata.  Light and medium edges
are reservoir-sampled with live middle-vertex counters; heavy edges are never
stored at all: an auxiliary sample of the stream detects them at their second
sighting and simultaneously estimates their contribution.

The oracle passed to :func:`run_adjlist` labels an edge light when its
predicted middle-vertex count falls below ``params.r_threshold`` (inclusive
heavy comparison), and the per-pass verdict cache guarantees both sightings
of an edge take the same branch.
"""

from __future__ import annotations

import math
from collections.abc import Iterable
from dataclasses import dataclass

from .errors import StreamModelError, scaled_term
from .graph import AdjBlock, Edge, canonical_edge
from .oracles import HeavyOracle
from .randkit import Rng

__all__ = ["AdjParams", "AdjState", "AdjResult", "adj_params", "run_adjlist"]

HIGH_T = "high-t"
LOW_T = "low-t"


@dataclass(frozen=True)
class AdjParams:
    """Sampling rates and thresholds for one adjacency-list pass."""

    regime: str
    rho: float
    r_threshold: float  # oracle's heavy cutoff on middle-vertex counts
    p1: float  # light-edge sampling rate
    p2: float  # medium-edge sampling rate
    p3: float  # auxiliary stream sampling rate
    epsilon: float
    t_est: float

    @classmethod
    def saturated(cls, rho: float = 1.0, r_threshold: float = 1.0) -> "AdjParams":
        """All rates forced to 1; exact by construction with a perfect oracle."""
        return cls(HIGH_T, rho, r_threshold, 1.0, 1.0, 1.0, 1.0, 1.0)


def _clamp01(p: float) -> float:
    return min(1.0, max(0.0, p))


def adj_params(
    m: int,
    n: int,
    epsilon: float,
    t_est: float,
    *,
    alpha: float = 4.0,
    beta: float = 4.0,
    gamma: float = 4.0,
) -> AdjParams:
    """Derive the pass parameters from the assumed triangle-count estimate.

    The high-count regime applies when t_est >= sqrt(m / epsilon); otherwise
    light edges are never stored individually (p1 = 0) and medium edges are
    kept outright (p2 = 1).  All probabilities are clamped to [0, 1].
    """
    if m < 1 or n < 2:
        raise ValueError("need m >= 1 and n >= 2")
    if not 0.0 < epsilon <= 1.0:
        raise ValueError("epsilon must be in (0, 1]")
    if t_est < 1:
        raise ValueError("t_est must be at least 1")
    inv_eps2 = 1.0 / (epsilon * epsilon)
    if t_est >= math.sqrt(m / epsilon):
        rho = (m * t_est) ** (1.0 / 3.0)
        p1 = _clamp01(alpha * inv_eps2 / rho)
        p2 = min(beta * inv_eps2 * rho / t_est, 1.0)
        p3 = _clamp01(gamma * inv_eps2 * math.log(n) / rho)
        regime = HIGH_T
    else:
        rho = math.sqrt(m) / epsilon
        p1 = 0.0
        p2 = 1.0
        p3 = _clamp01(gamma * inv_eps2 / rho)
        regime = LOW_T
    return AdjParams(regime, rho, t_est / rho, p1, p2, p3, epsilon, t_est)


class AdjState:
    """Mutable single-pass state: sample sets, counters, accumulators.

    Auxiliary entries are kept oriented (sampling-block vertex first) and
    flagged once their other endpoint's block arrives; only entries sampled
    at their first sighting can ever be flagged, which is exactly what the
    heavy detector must count.
    """

    def __init__(self) -> None:
        self.s_light: dict[Edge, int] = {}
        self.s_medium: dict[Edge, int] = {}
        self.aux_src: dict[int, dict[int, bool]] = {}
        self.aux_dst: dict[int, list[int]] = {}
        self.aux_size = 0
        self.a_light = 0
        self.a_medium = 0
        self.a_heavy = 0

    def add_aux(self, src: int, dst: int) -> None:
        self.aux_src.setdefault(src, {})[dst] = False
        self.aux_dst.setdefault(dst, []).append(src)
        self.aux_size += 1

    def flag_second_sightings(self, v: int) -> None:
        for src in self.aux_dst.get(v, ()):
            self.aux_src[src][v] = True

    def heavy_detect_count(self, u: int, block_neighbors: frozenset[int] | set[int]) -> int:
        """Flagged auxiliary edges u-z whose z sits in the current block."""
        entries = self.aux_src.get(u)
        if not entries:
            return 0
        if len(entries) <= len(block_neighbors):
            return sum(
                1 for z, flagged in entries.items() if flagged and z in block_neighbors
            )
        return sum(1 for z in block_neighbors if entries.get(z, False))

    def bump_counters(self, block_neighbors: set[int]) -> None:
        for e in self.s_light:
            if e[0] in block_neighbors and e[1] in block_neighbors:
                self.s_light[e] += 1
        for e in self.s_medium:
            if e[0] in block_neighbors and e[1] in block_neighbors:
                self.s_medium[e] += 1

    @property
    def stored_edges(self) -> int:
        return len(self.s_light) + len(self.s_medium) + self.aux_size


@dataclass(frozen=True)
class AdjResult:
    estimate: float
    a_light: int
    a_medium: int
    a_heavy: int
    peak_edges: int


def run_adjlist(
    stream: Iterable[AdjBlock],
    oracle: HeavyOracle,
    params: AdjParams,
    rng: Rng,
) -> AdjResult:
    """Single pass over an adjacency-list stream of :class:`AdjBlock`.

    Returns the stratified estimate A_l/p1 + A_m/p2 + A_h/p3 together with
    the peak number of stored edges.  A stream in which some edge does not
    appear exactly twice raises :class:`StreamModelError`.
    """
    st = AdjState()
    sightings: dict[Edge, int] = {}
    blocks_seen: set[int] = set()
    detect_threshold = params.p3 * params.rho
    peak = 0

    for block in stream:
        v = block.vertex
        if v in blocks_seen:
            raise StreamModelError(f"vertex {v} produced two adjacency blocks")
        blocks_seen.add(v)
        nv = set(block.neighbors)
        if len(nv) != len(block.neighbors) or v in nv:
            raise StreamModelError(f"malformed neighbor list for vertex {v}")

        st.bump_counters(nv)
        st.flag_second_sightings(v)

        for u in block.neighbors:
            e = canonical_edge(v, u)
            seen = sightings.get(e, 0) + 1
            if seen > 2:
                raise StreamModelError(f"edge {e} appeared more than twice")
            sightings[e] = seen

            if params.p3 > 0 and rng.bernoulli(params.p3):
                st.add_aux(v, u)

            if not oracle.query(e):
                if e in st.s_light:
                    st.a_light += st.s_light[e]
                elif params.p1 > 0 and rng.bernoulli(params.p1):
                    st.s_light[e] = 0
            else:
                hits = st.heavy_detect_count(u, nv)
                if hits >= detect_threshold:
                    st.a_heavy += hits
                elif e in st.s_medium:
                    st.a_medium += st.s_medium[e]
                elif params.p2 > 0 and rng.bernoulli(params.p2):
                    st.s_medium[e] = 0

        peak = max(peak, st.stored_edges)

    if any(count != 2 for count in sightings.values()):
        raise StreamModelError("some edge appeared only once in the stream")

    estimate = (
        scaled_term(st.a_light, params.p1, "light accumulator")
        + scaled_term(st.a_medium, params.p2, "medium accumulator")
        + scaled_term(st.a_heavy, params.p3, "heavy accumulator")
    )
    return AdjResult(estimate, st.a_light, st.a_medium, st.a_heavy, peak)
