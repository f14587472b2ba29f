"""Numpy implementation of the float iteration kernels.

Used when the compiled extension is unavailable.  Trajectories are advanced
together, one vectorized step at a time.
"""

import numpy as np


def _step(x, lo, sh, s):
    i = np.searchsorted(lo, x, side="right") - 1
    x = x + sh[i]
    x = np.where(x >= s, x - s, x)
    return np.where(x < 0.0, x + s, x)


def _near(x, disc, eps):
    k = np.searchsorted(disc, x)
    right = np.abs(disc[np.minimum(k, len(disc) - 1)] - x)
    left = np.abs(x - disc[np.maximum(k - 1, 0)])
    return np.minimum(left, right) < eps


def run_batch(x0, steps, record_from, lo, sh, disc, s, eps):
    x = np.array(x0, dtype=np.float64)
    n = len(x)
    out = np.empty((n, max(steps - record_from, 0)), dtype=np.float64)
    ok = np.ones(n, dtype=bool)
    for t in range(steps):
        ok &= ~_near(x, disc, eps)
        x = _step(x, lo, sh, s)
        if t >= record_from:
            out[:, t - record_from] = x
    return out, ok


def return_times(x0, cap, lo, sh, s, slo, shi):
    x = np.array(x0, dtype=np.float64)
    times = np.full(len(x), -1, dtype=np.int64)
    active = np.arange(len(x))
    for t in range(1, cap + 1):
        if not len(active):
            break
        x[active] = _step(x[active], lo, sh, s)
        k = np.searchsorted(slo, x[active], side="right") - 1
        inside = (k >= 0) & (x[active] < shi[np.maximum(k, 0)])
        times[active[inside]] = t
        active = active[~inside]
    return times
