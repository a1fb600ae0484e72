"""Pure-numpy Monte Carlo trial kernels (fallback path).

Same per-trial seeding and draw order as the numba kernels. Main-lobe trial
values are bit-identical to the numba path (integer sums); side-lobe values
agree to within summation-order rounding (np.sum is pairwise, the numba
accumulator is sequential).
"""

from __future__ import annotations

import numpy as np

from ._seeding import trial_seed


def main_lobe_trials(master, trials, lam_ml, lam_bs, unit_temp):
    out = np.empty(trials)
    for i in range(trials):
        rs = np.random.RandomState(trial_seed(master, i))
        m = rs.poisson(lam_ml)
        out[i] = unit_temp * rs.poisson(lam_bs, size=m).sum()
    return out


def side_lobe_trials(master, trials, lam_cap, lam_bs, cos_lo, sq_sum, sq_cross,
                     half_alpha, prefactor):
    out = np.empty(trials)
    for i in range(trials):
        rs = np.random.RandomState(trial_seed(master, i))
        m = rs.poisson(lam_cap)
        cos_theta = rs.uniform(cos_lo, 1.0, size=m)
        n = rs.poisson(lam_bs, size=m)
        x_sq = sq_sum - sq_cross * cos_theta
        out[i] = prefactor * np.sum(x_sq ** (-half_alpha) * n)
    return out
