"""Seeded Monte Carlo oracle for the RFI temperature statistics.

Samples the cluster process directly (no closed forms anywhere on this
path) and estimates cumulants with unbiased k-statistics, so analytic and
simulated results can cross-validate each other.

Backend selection: the numba kernels are used when available; set
RFI_COEXIST_BACKEND=numpy to force the pure-numpy fallback (or =numba to
insist on numba and fail loudly if it cannot be imported).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Literal

import numpy as np

from . import _kernels_numpy
from ._seeding import stream_master
from .geometry import GeometrySummary
from .scenario import Scenario, eta, omega

Lobe = Literal["main", "side"]

_BACKEND_ENV = "RFI_COEXIST_BACKEND"


def _load_backend():
    choice = os.environ.get(_BACKEND_ENV, "").strip().lower()
    if choice not in ("", "numba", "numpy"):
        raise ValueError(f"{_BACKEND_ENV} must be 'numba' or 'numpy', got {choice!r}")
    if choice == "numpy":
        return _kernels_numpy, "numpy"
    try:
        from . import _kernels_numba
        return _kernels_numba, "numba"
    except ImportError:
        if choice == "numba":
            raise
        return _kernels_numpy, "numpy"


_kernels, _backend_name = _load_backend()


def active_backend() -> str:
    """Name of the trial-kernel backend in use: 'numba' or 'numpy'."""
    return _backend_name


@dataclass(frozen=True)
class McConfig:
    trials: int
    seed: int
    workers: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")


@dataclass(frozen=True)
class McEstimate:
    lobe: Lobe
    mean: float
    variance: float
    skewness: float
    excess_kurtosis: float
    se_mean: float
    se_variance: float
    trials: int
    seed: int
    flags: tuple[str, ...] = ()


def sample_main_lobe(s: Scenario, geo: GeometrySummary, rng: np.random.RandomState) -> float:
    """One main-lobe realization: Poisson(lambda_ml) clusters at d_ml, each
    with a Poisson(lambda_BS) BS count."""
    m = rng.poisson(geo.lambda_ml)
    if m == 0:
        return 0.0
    unit = _main_unit(s, geo)
    return unit * rng.poisson(s.bs_intensity, size=m).sum()


def sample_main_lobe_collapsed(s: Scenario, geo: GeometrySummary,
                               rng: np.random.RandomState) -> float:
    """Mean-matching shortcut: one Poisson(lambda_ml * lambda_BS) BS count.

    This reproduces only the mean of the two-stage sampler; a Poisson sum of
    Poisson counts is compound Poisson, so variance and higher cumulants
    differ. Kept for the mean-equivalence check, never used by estimate().
    """
    return _main_unit(s, geo) * rng.poisson(geo.lambda_ml * s.bs_intensity)


def sample_side_lobe(s: Scenario, geo: GeometrySummary, rng: np.random.RandomState) -> float:
    """One side-lobe realization over the whole exposed cap."""
    m = rng.poisson(geo.lambda_cap)
    if m == 0:
        return 0.0
    cos_theta = rng.uniform(geo.cos_theta_max, 1.0, size=m)
    n = rng.poisson(s.bs_intensity, size=m)
    r, h = s.earth_radius, s.sat_center_distance
    x_sq = r * r + h * h - 2.0 * h * r * cos_theta
    alpha = s.path_loss_exponent
    prefactor = s.gain.side_lobe_gain * eta(s) * omega(s) ** alpha
    return prefactor * np.sum(x_sq ** (-alpha / 2.0) * n)


def _main_unit(s: Scenario, geo: GeometrySummary) -> float:
    return s.gain.main_lobe_gain * eta(s) * (omega(s) / geo.d_ml) ** s.path_loss_exponent


def _set_numba_threads(workers: int) -> None:
    import numba

    numba.set_num_threads(min(workers, numba.config.NUMBA_NUM_THREADS))


def run_trials(s: Scenario, geo: GeometrySummary, lobe: Lobe, cfg: McConfig) -> np.ndarray:
    """Array of cfg.trials independent realizations of one lobe's total.

    Trial i depends only on (cfg.seed, lobe, i); worker count affects
    scheduling, never values.
    """
    master = stream_master(cfg.seed, lobe)
    if _backend_name == "numba":
        _set_numba_threads(cfg.workers)
        master = np.uint64(master)  # top-bit-set ints overflow int64 inference
    if lobe == "main":
        return _kernels.main_lobe_trials(
            master, cfg.trials, geo.lambda_ml, s.bs_intensity, _main_unit(s, geo)
        )
    r, h = s.earth_radius, s.sat_center_distance
    alpha = s.path_loss_exponent
    prefactor = s.gain.side_lobe_gain * eta(s) * omega(s) ** alpha
    return _kernels.side_lobe_trials(
        master, cfg.trials, geo.lambda_cap, s.bs_intensity,
        geo.cos_theta_max, r * r + h * h, 2.0 * h * r, alpha / 2.0, prefactor,
    )


def k_statistics(values: np.ndarray) -> tuple[float, float, float, float]:
    """Unbiased cumulant estimators k1..k4 from a sample.

    Orders that need more data than provided (k2 needs n >= 2, k3 n >= 3,
    k4 n >= 4) come back as NaN.
    """
    n = len(values)
    k1 = float(np.mean(values))
    d = values - k1
    m2 = float(np.mean(d * d))
    m3 = float(np.mean(d**3))
    m4 = float(np.mean(d**4))
    k2 = n / (n - 1) * m2 if n >= 2 else math.nan
    k3 = n * n / ((n - 1) * (n - 2)) * m3 if n >= 3 else math.nan
    k4 = (
        n * n * ((n + 1) * m4 - 3 * (n - 1) * m2 * m2)
        / ((n - 1) * (n - 2) * (n - 3))
        if n >= 4
        else math.nan
    )
    return k1, k2, k3, k4


def estimate(s: Scenario, geo: GeometrySummary, lobe: Lobe, cfg: McConfig) -> McEstimate:
    """Monte Carlo estimate of one lobe's RFI temperature statistics."""
    values = run_trials(s, geo, lobe, cfg)
    n = cfg.trials
    k1, k2, k3, k4 = k_statistics(values)
    flags: tuple[str, ...] = ()
    if n < 2:
        flags = ("insufficient_trials_for_variance",)
    skew = k3 / k2**1.5 if n >= 3 and k2 > 0 else math.nan
    exkurt = k4 / (k2 * k2) if n >= 4 and k2 > 0 else math.nan
    se_mean = math.sqrt(k2 / n) if n >= 2 else math.nan
    # Var(s^2) = k4/n + 2 k2^2/(n-1); clip the k4 plug-in to keep the root real
    se_var = (
        math.sqrt(max(k4 / n + 2.0 * k2 * k2 / (n - 1), 0.0)) if n >= 4 else math.nan
    )
    return McEstimate(
        lobe=lobe, mean=k1, variance=k2, skewness=skew, excess_kurtosis=exkurt,
        se_mean=se_mean, se_variance=se_var, trials=n, seed=cfg.seed, flags=flags,
    )
