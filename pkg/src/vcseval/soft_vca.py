"""Differentiable clustering penalty: soft-min distances, soft T, gradients.

The hard nearest-neighbor distance is replaced by a log-sum-exp soft
minimum so the clustering statistic becomes differentiable. A weighted
extension assigns each event a membership weight in [0,1]; binary
weights recover the plain soft statistic on the weight-1 subset, while
fractional weights (e.g. per-event error mass |p - y|) give the penalty
a gradient path back to model outputs.

All log-sum-exp evaluations shift by the max exponent, so large beta is
safe. sign(0) is taken as 0, a valid subgradient at duplicate
timestamps.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import AllZeroWeights, InsufficientSet


@dataclass(frozen=True)
class SoftConfig:
    """Sharpness beta, penalty weight gamma, and adaptive-beta settings."""

    beta: float = 1.0
    gamma: float = 0.1
    scale_adaptive_beta: bool = True
    target_sharpness: float = 5.0

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError("beta must be positive")
        if self.gamma < 0:
            raise ValueError("gamma must be non-negative")
        if not self.target_sharpness > 0:
            raise ValueError("target_sharpness must be positive")

    def effective_beta(self, timestamps):
        """s / (median positive inter-event gap), else the configured beta.

        Ties sharpness to the time scale of the reference timestamps so
        the soft-min bound log(n-1)/beta stays small regardless of units.
        """
        if not self.scale_adaptive_beta:
            return self.beta
        ts = np.sort(np.asarray(timestamps, dtype=np.float64))
        gaps = np.diff(ts)
        gaps = gaps[gaps > 0]
        if gaps.size == 0:
            return self.beta
        return float(self.target_sharpness / np.median(gaps))


@dataclass(frozen=True)
class SoftTrial:
    d_r_soft: float
    d_disg_soft: float
    t_soft: float
    weight_gradient: np.ndarray = field(repr=False)


def soft_nn_distance(entry, disg_set, beta):
    """Soft minimum distance -log(sum exp(-beta*|dt|))/beta over other entries.

    May go negative when many near-duplicate neighbors exist: the inner
    sum then exceeds 1. Lower-bounded by hard_min - log(n-1)/beta.
    """
    entry_id, t = entry
    mask = np.array([i != entry_id for i in disg_set.ids], dtype=bool)
    if not mask.any():
        raise InsufficientSet("soft distance needs at least one other entry")
    d = np.abs(disg_set.times[mask] - t)
    exponents = -beta * d
    m = exponents.max()
    return float(-(m + np.log(np.exp(exponents - m).sum())) / beta)


def soft_nn_gradient(entry, disg_set, beta):
    """Analytic partials of soft_nn_distance.

    Returns (d/dt_entry, array of d/dt_other over all set entries in set
    order, zero at the entry's own position). The weights are the
    softmax of -beta*|dt|, so each partial has magnitude at most 1.
    """
    entry_id, t = entry
    mask = np.array([i != entry_id for i in disg_set.ids], dtype=bool)
    if not mask.any():
        raise InsufficientSet("soft gradient needs at least one other entry")
    delta = t - disg_set.times[mask]
    exponents = -beta * np.abs(delta)
    m = exponents.max()
    w = np.exp(exponents - m)
    w /= w.sum()
    signs = np.sign(delta)
    d_dt = float((w * signs).sum())
    grads = np.zeros(len(disg_set.ids))
    grads[mask] = -w * signs
    return d_dt, grads


def _weighted_soft_rows(dist, log_w, beta):
    """Per-row soft distance and its weight gradient.

    dist: (q, n) absolute distances from q query points to n weighted
    events; log_w: (n,) with -inf at zero weights. Row r yields
    d(r) = -log(sum_j w_j exp(-beta*dist[r,j]))/beta and the gradient
    d d(r)/d w_j = -exp(-beta*dist[r,j] - logS_r)/beta, which is finite
    and generally nonzero even where w_j = 0.
    """
    ell = log_w[None, :] - beta * dist
    m = ell.max(axis=1, keepdims=True)
    log_s = m[:, 0] + np.log(np.exp(ell - m).sum(axis=1))
    d = -log_s / beta
    grad = -np.exp(-beta * dist - log_s[:, None]) / beta
    return d, grad


def weighted_soft_t(timestamps, weights, random_times, beta):
    """Weight-averaged soft T statistic with analytic weight gradients.

    Each event's soft distance sums only over the other events, scaled
    by their weights; the disagreement side averages those distances
    with the weights themselves, so zero-weight events drop out of the
    value entirely. The reference side averages soft distances from the
    random times to the full weighted set (no exclusion). Returns a
    SoftTrial whose weight_gradient is d t_soft / d weights.
    """
    t = np.asarray(timestamps, dtype=np.float64)
    w = np.asarray(weights, dtype=np.float64)
    r = np.asarray(random_times, dtype=np.float64)
    if t.shape != w.shape or t.ndim != 1:
        raise ValueError("timestamps and weights must be 1-d and equal length")
    if np.any(w < 0) or np.any(w > 1):
        raise ValueError("weights must lie in [0, 1]")
    w_total = w.sum()
    if w_total <= 0:
        raise AllZeroWeights("weighted soft T needs positive total weight")
    if np.count_nonzero(w > 0) < 2:
        raise InsufficientSet("weighted soft T needs >= 2 positive-weight events")
    if r.size < 1:
        raise ValueError("at least one random reference time is required")

    with np.errstate(divide="ignore"):
        log_w = np.where(w > 0, np.log(np.where(w > 0, w, 1.0)), -np.inf)

    dist_ev = np.abs(t[:, None] - t[None, :])
    log_w_excl = np.tile(log_w, (t.size, 1))
    np.fill_diagonal(log_w_excl, -np.inf)
    ell = log_w_excl - beta * dist_ev
    m = ell.max(axis=1, keepdims=True)
    log_s_ev = m[:, 0] + np.log(np.exp(ell - m).sum(axis=1))
    d_ev = -log_s_ev / beta
    grad_ev = -np.exp(-beta * dist_ev - log_s_ev[:, None]) / beta
    np.fill_diagonal(grad_ev, 0.0)

    dist_r = np.abs(r[:, None] - t[None, :])
    d_r, grad_r = _weighted_soft_rows(dist_r, log_w, beta)

    numer = float((w * d_ev).sum())
    b = numer / w_total
    a = float(d_r.mean())

    d_numer = d_ev + grad_ev.T @ w
    db = (d_numer - b) / w_total
    da = grad_r.mean(axis=0)
    denom = a + b
    dt = (da * b - a * db) / (denom * denom)

    return SoftTrial(
        d_r_soft=a,
        d_disg_soft=b,
        t_soft=a / denom,
        weight_gradient=dt,
    )


def soft_t(timestamps, random_times, beta):
    """Unweighted soft T: weighted_soft_t with unit weight on every event."""
    t = np.asarray(timestamps, dtype=np.float64)
    return weighted_soft_t(t, np.ones_like(t), random_times, beta)


def vca_penalty(t_soft, gamma):
    """Quadratic pull toward t_soft = 0.5: (value, d value / d t_soft)."""
    if gamma < 0:
        raise ValueError("gamma must be non-negative")
    gap = 0.5 - t_soft
    return gamma * gap * gap, -2.0 * gamma * gap


def finite_difference_check(fn, point, step=1e-6):
    """Max relative error between fn's analytic gradient and central differences.

    fn maps a 1-d point to (value, gradient). The relative error per
    coordinate is |fd - analytic| / max(1, |fd|, |analytic|), so near-zero
    gradients are compared absolutely.
    """
    x = np.asarray(point, dtype=np.float64)
    _, grad = fn(x)
    grad = np.asarray(grad, dtype=np.float64)
    worst = 0.0
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = step
        hi, _ = fn(x + e)
        lo, _ = fn(x - e)
        fd = (hi - lo) / (2.0 * step)
        err = abs(fd - grad[i]) / max(1.0, abs(fd), abs(grad[i]))
        worst = max(worst, err)
    return worst
