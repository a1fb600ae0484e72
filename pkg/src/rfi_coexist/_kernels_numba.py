"""Numba-compiled Monte Carlo trial kernels (the hot path).

Each prange iteration re-seeds the thread-local legacy RNG with its trial's
derived 32-bit seed, so results are bit-identical for any thread count.
numba's in-njit np.random reproduces numpy's RandomState streams exactly;
the draw order here (cluster count, then all cap positions, then all BS
counts) is kept identical to the numpy fallback in _kernels_numpy.py.
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange

_U64 = np.uint64
_MASK = _U64(0xFFFFFFFFFFFFFFFF)


@njit(cache=True, inline="always")
def _trial_seed(master, trial):
    z = (_U64(master) + _U64(trial)) & _MASK
    z = (z + _U64(0x9E3779B97F4A7C15)) & _MASK
    z = ((z ^ (z >> _U64(30))) * _U64(0xBF58476D1CE4E5B9)) & _MASK
    z = ((z ^ (z >> _U64(27))) * _U64(0x94D049BB133111EB)) & _MASK
    return np.uint32((z ^ (z >> _U64(31))) >> _U64(32))


@njit(parallel=True, cache=True)
def main_lobe_trials(master, trials, lam_ml, lam_bs, unit_temp):
    """Per-trial main-lobe totals: Poisson(lam_ml) equidistant clusters,
    Poisson(lam_bs) BSs each, unit_temp kelvin per BS."""
    out = np.empty(trials)
    for i in prange(trials):
        np.random.seed(_trial_seed(master, i))
        m = np.random.poisson(lam_ml)
        total = 0
        for _ in range(m):
            total += np.random.poisson(lam_bs)
        out[i] = unit_temp * total
    return out


@njit(parallel=True, cache=True)
def side_lobe_trials(master, trials, lam_cap, lam_bs, cos_lo, sq_sum, sq_cross,
                     half_alpha, prefactor):
    """Per-trial side-lobe totals over the whole exposed cap.

    Cluster slant distance squared is sq_sum - sq_cross * cos(theta) with
    cos(theta) area-uniform on [cos_lo, 1]; each cluster contributes
    prefactor * x^(-alpha) * Poisson(lam_bs).
    """
    out = np.empty(trials)
    for i in prange(trials):
        np.random.seed(_trial_seed(master, i))
        m = np.random.poisson(lam_cap)
        cos_theta = np.empty(m)
        for j in range(m):
            cos_theta[j] = np.random.uniform(cos_lo, 1.0)
        acc = 0.0
        for j in range(m):
            n = np.random.poisson(lam_bs)
            x_sq = sq_sum - sq_cross * cos_theta[j]
            acc += x_sq ** (-half_alpha) * n
        out[i] = prefactor * acc
    return out
