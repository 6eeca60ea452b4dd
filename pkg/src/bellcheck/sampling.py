"""Finite-shot Monte Carlo estimation of the normalized Bell value and of
the circuit distance, with Hoeffding shot planning.

One round draws (r, i) uniformly from {0,1} x {1..m}.  With r = 0 the
parties measure settings (A_i, B_i) and score 2*alpha[(a - b) mod d]; with
r = 1 they measure (A_{i+1}, B_i) and score 2*alpha[(b - a) mod d], where
the (m+1)-th Alice setting is setting 1 with +1 added to its outcome mod d.
The round mean X is an unbiased estimate of I' and every round value lies
in [-2, 2], which yields the s > 8*ln(1/delta)/epsilon^2 shot budget.

Outcomes are drawn from the exact joint distribution of each setting pair
by inverse CDF over the d^2 cells.  Round j of an estimation run consumes
row j of a draw table that is a pure function of (seed, j), so partitioning
rounds across workers cannot change the reported estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bell import alpha_table
from .circuit import embed_double
from .distance import normalized_to_distance
from .measurement import outcome_distribution
from .tensor import RngStream, apply_bilocal, max_entangled


@dataclass(frozen=True)
class ShotPlan:
    """Shot budget, optionally carrying the accuracy target that produced it."""

    s: int
    epsilon: float | None = None
    delta: float | None = None

    def __post_init__(self):
        if self.s < 1:
            raise ValueError(f"shot count must be >= 1, got {self.s}")


def plan_shots(epsilon: float, delta: float) -> ShotPlan:
    """Smallest integer s with s > 8*ln(1/delta)/epsilon^2.

    Guarantees P(|X - I'| >= epsilon) <= delta.  Natural logarithm: the
    tail bound is of the exp(-s*epsilon^2/8) kind.
    """
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must be in (0, 1), got {epsilon}")
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must be in (0, 1), got {delta}")
    s = math.floor(8.0 * math.log(1.0 / delta) / epsilon**2) + 1
    return ShotPlan(s=s, epsilon=epsilon, delta=delta)


@dataclass(frozen=True)
class EstimationReport:
    """Result of one estimation run; X is the raw (unclamped) round mean."""

    s: int
    x: float
    distance_estimate: float
    epsilon: float | None
    delta: float | None
    seed: int
    d: int
    m: int
    setting_tallies: dict[str, int] = field(default_factory=dict)


class RoundSampler:
    """Per-state tables for single protocol rounds.

    Precomputes, for each of the 2m (r, i) branches, the flattened inverse
    CDF of the exact joint outcome distribution and the per-cell scores.
    """

    def __init__(self, psi: np.ndarray, d: int, m: int):
        if m < 2:
            raise ValueError(f"need m >= 2, got {m}")
        alpha = alpha_table(d, m).values
        a_idx = np.arange(d)[:, None]
        b_idx = np.arange(d)[None, :]
        self.d = d
        self.m = m
        self.labels: list[str] = []
        self._cdfs: list[np.ndarray] = []
        self._scores: list[np.ndarray] = []
        for i in range(1, m + 1):
            for r in (0, 1):
                if r == 0:
                    x, y = i, i
                    score = 2.0 * alpha[(a_idx - b_idx) % d]
                elif i < m:
                    x, y = i + 1, i
                    score = 2.0 * alpha[(b_idx - a_idx) % d]
                else:
                    x, y = 1, m
                    score = 2.0 * alpha[(b_idx - a_idx - 1) % d]
                dist = outcome_distribution(psi, x, y, d, m)
                self._cdfs.append(np.cumsum(dist.probs.reshape(-1)))
                self._scores.append(score.reshape(-1))
                self.labels.append(f"A{i + r}B{i}")

    def evaluate(self, r: np.ndarray, i: np.ndarray, u: np.ndarray) -> np.ndarray:
        """Round scores for draw arrays r in {0,1}, i in 1..m, u in [0,1)."""
        r = np.asarray(r)
        i = np.asarray(i)
        u = np.asarray(u, dtype=float)
        branch = (i - 1) * 2 + r
        out = np.empty(u.shape[0])
        top = self.d * self.d - 1
        for idx in range(2 * self.m):
            mask = branch == idx
            if not np.any(mask):
                continue
            cells = np.searchsorted(self._cdfs[idx], u[mask], side="right")
            np.clip(cells, 0, top, out=cells)
            out[mask] = self._scores[idx][cells]
        return out

    def tally(self, r: np.ndarray, i: np.ndarray) -> dict[str, int]:
        branch = (np.asarray(i) - 1) * 2 + np.asarray(r)
        counts = np.bincount(branch, minlength=2 * self.m)
        return {label: int(count) for label, count in zip(self.labels, counts)}

    def sample(self, rng: RngStream) -> float:
        """One round, drawing r, i, and the outcome cell from a live stream."""
        r = int(rng.gen.integers(2))
        i = int(rng.gen.integers(1, self.m + 1))
        u = float(rng.gen.random())
        return float(self.evaluate(np.array([r]), np.array([i]), np.array([u]))[0])


def sample_round(psi: np.ndarray, d: int, m: int, rng: RngStream) -> float:
    """Single protocol round on a fresh state; see RoundSampler for the rules."""
    return RoundSampler(psi, d, m).sample(rng)


def draw_table(seed: int, s: int, m: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-round draws (r, i, u) for rounds 0..s-1; row j depends only on (seed, j)."""
    rng = RngStream(seed)
    r = rng.gen.integers(2, size=s)
    i = rng.gen.integers(1, m + 1, size=s)
    u = rng.gen.random(s)
    return r, i, u


def estimate_normalized_bell(
    psi: np.ndarray, d: int, m: int, plan: ShotPlan, seed: int
) -> EstimationReport:
    """Run plan.s rounds and report the mean X with its accuracy certificate.

    X itself is never clamped (keeping it unbiased); only the derived
    distance estimate clamps into [0, 1].
    """
    sampler = RoundSampler(psi, d, m)
    r, i, u = draw_table(seed, plan.s, m)
    values = sampler.evaluate(r, i, u)
    x = float(values.mean())
    return EstimationReport(
        s=plan.s,
        x=x,
        distance_estimate=normalized_to_distance(x),
        epsilon=plan.epsilon,
        delta=plan.delta,
        seed=int(seed),
        d=d,
        m=m,
        setting_tallies=sampler.tally(r, i),
    )


def estimate_distance(
    u1: np.ndarray, u2: np.ndarray, m: int, plan: ShotPlan, seed: int
) -> EstimationReport:
    """Shot-sampled distance between two unitaries via the doubling embedding.

    Both inputs are embedded with ancillas, the embedded pair acts on the
    maximally entangled state, and the sampled X converts to a distance
    exactly (up to shot noise) because the embedding pins the Bell value
    to a function of the distance alone.
    """
    u1 = np.asarray(u1)
    u2 = np.asarray(u2)
    if u1.shape != u2.shape:
        raise ValueError(f"dimension mismatch: {u1.shape} vs {u2.shape}")
    e1 = embed_double(u1)
    e2 = embed_double(u2)
    d = e1.shape[0]
    psi = apply_bilocal(e1, e2, max_entangled(d))
    return estimate_normalized_bell(psi, d, m, plan, seed)
