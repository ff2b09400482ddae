"""Volatility-Cluster Statistic over disagreement timestamps.

VCS contrasts nearest-neighbor distances inside the disagreement set
with distances from uniformly drawn reference times to that set. Values
near 0 mean disagreements look uniform in time; values near 0.5 mean
strongly clustered (t_stat near 1) or strongly regular (t_stat near 0)
patterns.

Determinism contract: trial i draws from a fresh substream seeded by
(seed, i), first the subsample positions (without replacement), then
the k reference times as normalized u in [0,1) mapped affinely onto the
period. Results are therefore reproducible bit-for-bit and independent
of trial execution order, and rescaling time rescales every distance by
the same factor, leaving each t_stat unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateDistances,
    EmptySet,
    InsufficientSet,
    TooFewDisagreements,
)


@dataclass(frozen=True)
class VcsConfig:
    """Repeat count, subsample fraction, and base seed for VCS runs."""

    tau: int = 5
    subsample_fraction: float = 0.5
    seed: int = 42

    def __post_init__(self):
        if not (isinstance(self.tau, (int, np.integer)) and self.tau >= 1):
            raise ValueError("tau must be a positive integer")
        if not 0.0 < self.subsample_fraction < 1.0:
            raise ValueError("subsample_fraction must lie in (0, 1)")
        if not (isinstance(self.seed, (int, np.integer)) and 0 <= self.seed < 2**64):
            raise ValueError("seed must be a 64-bit unsigned integer")

    def subsample_size(self, k_total):
        """k = max(1, floor(fraction * K)), capped at K - 1."""
        return min(max(1, int(np.floor(self.subsample_fraction * k_total))), k_total - 1)


@dataclass(frozen=True)
class VcsTrial:
    repeat_index: int
    subsample_ids: tuple
    random_times: np.ndarray = field(repr=False)
    d_disg: float
    d_r: float
    t_stat: float


@dataclass(frozen=True)
class VcsResult:
    trials: tuple
    t_mean: float
    vcs: float
    config: VcsConfig
    k_total: int

    @property
    def signed_deviation(self):
        """t_mean - 0.5; positive means clustered, negative means regular."""
        return self.t_mean - 0.5


def nn_distance(entry, disg_set):
    """Minimum |t - t'| from entry to any other set member (excluded by id)."""
    entry_id, t = entry
    mask = np.array([i != entry_id for i in disg_set.ids], dtype=bool)
    if not mask.any():
        raise InsufficientSet("no other entry to measure a distance to")
    return float(np.min(np.abs(disg_set.times[mask] - t)))


def disg_distance_sum(subsample_ids, disg_set):
    """Sum of self-excluded nearest-neighbor distances over the subsample."""
    by_id = {i: t for i, t in zip(disg_set.ids, disg_set.times)}
    return float(sum(nn_distance((i, by_id[i]), disg_set) for i in subsample_ids))


def random_reference_sum(k, period, disg_set, rng):
    """Distances from k uniform reference times to their nearest set entry.

    Reference times are t_start + u * (t_end - t_start) with u ~ U[0,1)
    drawn from rng. They are not set members, so no exclusion applies.
    Returns (distance sum, drawn times).
    """
    if disg_set.size < 1:
        raise EmptySet("reference distances need a nonempty disagreement set")
    t_start, t_end = period
    u = rng.random(k)
    times = t_start + u * (t_end - t_start)
    sorted_times = np.sort(disg_set.times)
    return float(_dist_to_sorted(times, sorted_times).sum()), times


def t_statistic(d_r, d_disg):
    """d_r / (d_r + d_disg), the per-trial clustering ratio."""
    if d_r < 0 or d_disg < 0:
        raise ValueError("distance sums must be non-negative")
    total = d_r + d_disg
    if total == 0:
        raise DegenerateDistances("both distance sums are zero")
    return d_r / total


def _nn_gaps(times):
    """Self-excluded nearest-neighbor distance for every entry, by position."""
    order = np.argsort(times, kind="stable")
    ts = times[order]
    gaps = np.diff(ts)
    left = np.concatenate(([np.inf], gaps))
    right = np.concatenate((gaps, [np.inf]))
    out = np.empty_like(ts)
    out[order] = np.minimum(left, right)
    return out


def _dist_to_sorted(points, sorted_times):
    """Distance from each point to its nearest value in sorted_times."""
    idx = np.searchsorted(sorted_times, points)
    lo = np.clip(idx - 1, 0, sorted_times.size - 1)
    hi = np.clip(idx, 0, sorted_times.size - 1)
    return np.minimum(np.abs(points - sorted_times[lo]), np.abs(points - sorted_times[hi]))


def vcs(disg_set, period, config=VcsConfig()):
    """Run tau independent trials and aggregate VCS = |0.5 - mean(t_stat)|."""
    k_total = disg_set.size
    if k_total < 2:
        raise TooFewDisagreements(
            f"VCS needs at least 2 disagreements, got {k_total}"
        )
    k = config.subsample_size(k_total)
    t_start, t_end = period
    span = t_end - t_start
    times = disg_set.times
    gaps = _nn_gaps(times)
    sorted_times = np.sort(times)

    trials = []
    t_sum = 0.0
    for i in range(config.tau):
        rng = np.random.default_rng((config.seed, i))
        positions = rng.choice(k_total, size=k, replace=False)
        d_disg = float(gaps[positions].sum())
        u = rng.random(k)
        random_times = t_start + u * span
        d_r = float(_dist_to_sorted(random_times, sorted_times).sum())
        t_stat = t_statistic(d_r, d_disg)
        trials.append(
            VcsTrial(
                repeat_index=i,
                subsample_ids=tuple(disg_set.ids[j] for j in positions),
                random_times=random_times,
                d_disg=d_disg,
                d_r=d_r,
                t_stat=t_stat,
            )
        )
        t_sum += t_stat

    t_mean = t_sum / config.tau
    return VcsResult(
        trials=tuple(trials),
        t_mean=t_mean,
        vcs=abs(0.5 - t_mean),
        config=config,
        k_total=k_total,
    )
