"""Independent reference implementations used to cross-check the package.

Everything here is written from the documented contracts only, without
importing package internals. Small-scale routines are deliberately
brute-force (full pairwise distance matrices, explicit loops); the
uniform-pattern band sampler uses a faster sorted-gap route that is
itself validated against the brute-force one in the unit tests.
"""

import math

import numpy as np


def brute_nn_distance(index, times):
    """Min |t_i - t_j| over j != i via the full pairwise matrix."""
    d = np.abs(times[index] - times)
    d[index] = np.inf
    return float(d.min())


def brute_disg_sum(positions, times):
    return float(sum(brute_nn_distance(i, times) for i in positions))


def brute_ref_sum(ref_times, times):
    d = np.abs(ref_times[:, None] - times[None, :])
    return float(d.min(axis=1).sum())


def brute_vcs(times, period, tau=5, frac=0.5, seed=42):
    """VCS per the documented contract with brute-force distances.

    Trial i draws from default_rng((seed, i)): first the subsample
    positions without replacement, then k normalized reference times.
    Returns (vcs, t_mean, per-trial t list).
    """
    times = np.asarray(times, dtype=np.float64)
    big_k = times.size
    k = min(max(1, int(math.floor(frac * big_k))), big_k - 1)
    t_start, t_end = period
    t_stats = []
    for i in range(tau):
        rng = np.random.default_rng((seed, i))
        positions = rng.choice(big_k, size=k, replace=False)
        d_disg = brute_disg_sum(positions, times)
        u = rng.random(k)
        ref = t_start + u * (t_end - t_start)
        d_r = brute_ref_sum(ref, times)
        t_stats.append(d_r / (d_r + d_disg))
    t_mean = float(np.mean(t_stats))
    return abs(0.5 - t_mean), t_mean, t_stats


def fast_vcs(times, period, tau=5, frac=0.5, seed=42):
    """Sorted-gap VCS used for the large Monte Carlo band.

    Same RNG contract as brute_vcs; validated against it in the unit
    tests before being trusted at scale.
    """
    times = np.sort(np.asarray(times, dtype=np.float64))
    big_k = times.size
    k = min(max(1, int(math.floor(frac * big_k))), big_k - 1)
    gaps = np.diff(times)
    nn = np.minimum(
        np.concatenate(([np.inf], gaps)), np.concatenate((gaps, [np.inf]))
    )
    t_start, t_end = period
    t_stats = []
    for i in range(tau):
        rng = np.random.default_rng((seed, i))
        positions = rng.choice(big_k, size=k, replace=False)
        d_disg = float(nn[positions].sum())
        u = rng.random(k)
        ref = t_start + u * (t_end - t_start)
        idx = np.searchsorted(times, ref)
        lo = np.clip(idx - 1, 0, big_k - 1)
        hi = np.clip(idx, 0, big_k - 1)
        d_r = float(np.minimum(np.abs(ref - times[lo]), np.abs(ref - times[hi])).sum())
        t_stats.append(d_r / (d_r + d_disg))
    t_mean = float(np.mean(t_stats))
    return abs(0.5 - t_mean), t_mean, t_stats


def uniform_band_samples(n_runs=10000, n_errors=200, period=(0.0, 1000.0),
                         tau=5, frac=0.5, master_seed=777):
    """VCS samples under the uniform null: n_runs independent patterns."""
    master = np.random.default_rng(master_seed)
    t_start, t_end = period
    out = np.empty(n_runs)
    for j in range(n_runs):
        times = t_start + master.random(n_errors) * (t_end - t_start)
        out[j], _, _ = fast_vcs(times, period, tau=tau, frac=frac, seed=j)
    return out


def softmin_direct(distances, beta):
    """High-precision soft minimum via math.fsum on the shifted series."""
    m = min(distances)
    total = math.fsum(math.exp(-beta * (d - m)) for d in distances)
    return m - math.log(total) / beta


def soft_t_direct(timestamps, weights, ref_times, beta):
    """Weighted soft T recomputed with scalar loops and math.fsum."""
    n = len(timestamps)
    d_ev = []
    for i in range(n):
        terms = [
            weights[j] * math.exp(-beta * abs(timestamps[i] - timestamps[j]))
            for j in range(n)
            if j != i and weights[j] > 0
        ]
        d_ev.append(-math.log(math.fsum(terms)) / beta)
    w_total = math.fsum(weights)
    b = math.fsum(w * d for w, d in zip(weights, d_ev)) / w_total
    d_ref = []
    for r in ref_times:
        terms = [
            weights[j] * math.exp(-beta * abs(r - timestamps[j]))
            for j in range(n)
            if weights[j] > 0
        ]
        d_ref.append(-math.log(math.fsum(terms)) / beta)
    a = math.fsum(d_ref) / len(d_ref)
    return a / (a + b)


def logistic_twin(features, labels, learning_rate, epochs):
    """Plain full-batch logistic regression mirroring the trainer contract.

    Zero init, numerically stable sigmoid split at z = 0, probabilities
    clamped to [1e-7, 1 - 1e-7] inside the logs with the gradient masked
    at the clamp bounds, mean gradient via X^T.
    """
    x = np.hstack([features, np.ones((features.shape[0], 1))])
    y = labels.astype(np.float64)
    theta = np.zeros(x.shape[1])
    eps = 1e-7
    for _ in range(epochs):
        z = x @ theta
        p = np.empty_like(z)
        pos = z >= 0
        p[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
        ez = np.exp(z[~pos])
        p[~pos] = ez / (1.0 + ez)
        gz = np.where((p > eps) & (p < 1.0 - eps), p - y, 0.0) / y.size
        theta = theta - learning_rate * (x.T @ gz)
    return theta


def average_precision_direct(y, p):
    """AP by explicit rank enumeration with stable descending sort."""
    order = sorted(range(len(p)), key=lambda i: -p[i])
    hits = 0
    total = 0.0
    for rank, idx in enumerate(order, start=1):
        if y[idx] == 1:
            hits += 1
            total += hits / rank
    return total / sum(y)


def auroc_direct(y, p):
    """AU-ROC by explicit pairwise comparison with 0.5 tie credit."""
    pos = [p[i] for i in range(len(y)) if y[i] == 1]
    neg = [p[i] for i in range(len(y)) if y[i] == 0]
    total = 0.0
    for a in pos:
        for b in neg:
            if a > b:
                total += 1.0
            elif a == b:
                total += 0.5
    return total / (len(pos) * len(neg))
