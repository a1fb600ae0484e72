"""Closed-form statistics of the aggregate RFI brightness temperature.

Both lobes see a compound-Poisson total: a Poisson number of clusters, each
contributing (per-BS unit temperature) x (Poisson BS count). The main lobe
collapses to a single slant distance d_ml; the side lobe integrates the
per-cluster MGF over the exposed cap with the linear radial cluster density.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Literal, Sequence

import numpy as np
from scipy.integrate import quad

from .combinatorics import p_n
from .errors import AlphaRangeError, MgfOverflowError, QuadratureError
from .geometry import GeometrySummary
from .scenario import Scenario, eta, omega

Lobe = Literal["main", "side"]

# Natural-log cap on any exponent fed to exp(); beyond this the MGF value
# is not representable and cumulants must come from the closed forms.
EXP_CAP = 700.0


@dataclass(frozen=True)
class CumulantSet:
    """Cumulants k_1..k_n (kelvin^n) of one lobe's RFI temperature, plus the
    derived moments: mean, variance, std, skewness, excess kurtosis, and the
    fourth central moment mu4 = k4 + 3 k2^2."""

    lobe: Lobe
    k: tuple[float, ...]  # k[i] is the (i+1)-th cumulant
    mean: float
    variance: float
    std: float
    skewness: float
    excess_kurtosis: float
    mu4: float

    @property
    def max_order(self) -> int:
        return len(self.k)


@dataclass(frozen=True)
class ThresholdVerdict:
    lobe: Lobe
    mean: float
    std: float
    threshold: float
    mean_exceeds: bool  # strict: mean > threshold


def _derived(lobe: Lobe, k: Sequence[float]) -> CumulantSet:
    k1, k2, k3, k4 = k[0], k[1], k[2], k[3]
    return CumulantSet(
        lobe=lobe,
        k=tuple(k),
        mean=k1,
        variance=k2,
        std=math.sqrt(k2),
        skewness=k3 / k2**1.5 if k2 > 0 else math.nan,
        excess_kurtosis=k4 / k2**2 if k2 > 0 else math.nan,
        mu4=k4 + 3.0 * k2 * k2,
    )


def t_cluster_unit(s: Scenario, geo: GeometrySummary, lobe: Lobe, x: float) -> float:
    """Worst-case brightness temperature (K) from ONE base station at slant
    distance x; a cluster of N such BSs contributes N times this."""
    if x <= 0:
        raise ValueError(f"distance must be positive, got {x!r}")
    g = s.gain.main_lobe_gain if lobe == "main" else s.gain.side_lobe_gain
    return g * eta(s) * (omega(s) / x) ** s.path_loss_exponent


def mgf_cluster(s: Scenario, x: float, g: float, t: float, exp_cap: float = EXP_CAP) -> float:
    """MGF of one cluster's RFI temperature at slant distance x and gain g:
    exp(lambda_BS * (exp(g eta omega^alpha x^-alpha t) - 1))."""
    inner = g * eta(s) * omega(s) ** s.path_loss_exponent * x ** (-s.path_loss_exponent) * t
    if inner > exp_cap:
        raise MgfOverflowError(inner, exp_cap)
    outer = s.bs_intensity * math.expm1(inner)
    if outer > exp_cap:
        raise MgfOverflowError(outer, exp_cap)
    return math.exp(outer)


def mgf_cluster_series(s: Scenario, x: float, g: float, t: float, order: int) -> float:
    """Truncated power series of the per-cluster MGF:
    sum_n p_n(lambda_BS) (g eta omega^alpha x^-alpha)^n t^n / n!."""
    unit = g * eta(s) * omega(s) ** s.path_loss_exponent * x ** (-s.path_loss_exponent)
    acc = 0.0
    term = 1.0  # unit^n t^n / n!
    for n in range(order + 1):
        acc += p_n(n, s.bs_intensity) * term
        term *= unit * t / (n + 1)
    return acc


def mgf_main_lobe(s: Scenario, geo: GeometrySummary, t: float) -> float:
    """MGF of the main-lobe total: exp(Lambda (M_cluster(t; d_ml, g_ml) - 1))."""
    mc = mgf_cluster(s, geo.d_ml, s.gain.main_lobe_gain, t)
    outer = geo.lambda_ml * (mc - 1.0)
    if outer > EXP_CAP:
        raise MgfOverflowError(outer, EXP_CAP)
    return math.exp(outer)


def mgf_side_lobe(s: Scenario, geo: GeometrySummary, t: float, rel_tol: float = 1e-10) -> float:
    """MGF of the side-lobe total over the whole exposed cap.

    Evaluates exp(-2 pi (r_e/h) lambda_c * integral_{d_min}^{d_max}
    (1 - M_cluster(t; x, g_sl)) x dx) with adaptive Gauss-Kronrod quadrature.
    """
    if not 0.0 < rel_tol <= 1e-4:
        raise ValueError(f"rel_tol must be in (0, 1e-4], got {rel_tol!r}")
    g = s.gain.side_lobe_gain
    # Raise overflow eagerly at the closest (worst-case) distance.
    mgf_cluster(s, geo.d_min, g, t)

    def integrand(x: float) -> float:
        return (1.0 - mgf_cluster(s, x, g, t)) * x

    epsrel = max(rel_tol, 1.5e-14)
    result = quad(integrand, geo.d_min, geo.d_max, epsabs=0.0, epsrel=epsrel,
                  limit=200, full_output=True)
    integral, abserr = result[0], result[1]
    # QUADPACK flags roundoff near t = 0 where the integrand is ~eps-sized
    # relative to its own terms; accept anything still within a few digits of
    # the requested tolerance and only treat genuine divergence as an error.
    if len(result) > 3 and abs(abserr) > max(100.0 * epsrel, 1e-8) * abs(integral):
        raise QuadratureError(f"side-lobe quadrature did not converge: {result[3]}")
    ratio = s.earth_radius / s.sat_center_distance
    exponent = -2.0 * math.pi * ratio * s.cluster_intensity * integral
    if exponent > EXP_CAP:
        raise MgfOverflowError(exponent, EXP_CAP)
    return math.exp(exponent)


def cumulants_main_lobe(s: Scenario, geo: GeometrySummary, max_order: int = 4) -> CumulantSet:
    """k_n = Lambda (g_ml eta omega^alpha)^n p_n(lambda_BS) d_ml^(-n alpha)."""
    if max_order < 4:
        raise ValueError("max_order must be >= 4 to derive the reported moments")
    alpha = s.path_loss_exponent
    base = s.gain.main_lobe_gain * eta(s) * omega(s) ** alpha
    k = [
        geo.lambda_ml * base**n * p_n(n, s.bs_intensity) * geo.d_ml ** (-n * alpha)
        for n in range(1, max_order + 1)
    ]
    return _derived("main", k)


def cumulants_side_lobe(s: Scenario, geo: GeometrySummary, max_order: int = 4) -> CumulantSet:
    """k_n = 2 pi / (2 - n alpha) (r_e/h) (g_sl eta omega^alpha)^n lambda_c
    p_n(lambda_BS) (d_max^(2 - n alpha) - d_min^(2 - n alpha))."""
    if max_order < 4:
        raise ValueError("max_order must be >= 4 to derive the reported moments")
    alpha = s.path_loss_exponent
    if alpha <= 2:
        raise AlphaRangeError(alpha)
    ratio = s.earth_radius / s.sat_center_distance
    base = s.gain.side_lobe_gain * eta(s) * omega(s) ** alpha
    k = []
    for n in range(1, max_order + 1):
        expo = 2.0 - n * alpha
        k.append(
            2.0 * math.pi / expo * ratio * base**n * s.cluster_intensity
            * p_n(n, s.bs_intensity) * (geo.d_max**expo - geo.d_min**expo)
        )
    return _derived("side", k)


def threshold_verdict(cs: CumulantSet, tau: float) -> ThresholdVerdict:
    """Mean-vs-threshold verdict; exceedance is strict (mean == tau passes)."""
    return ThresholdVerdict(
        lobe=cs.lobe, mean=cs.mean, std=cs.std, threshold=tau,
        mean_exceeds=cs.mean > tau,
    )


def cgf_numeric_cumulants(mgf: Callable[[float], float], order: int, scale: float) -> list[float]:
    """Cumulants of orders 1..order (order <= 4) by central finite
    differences of log(mgf) at 0.

    The base step is eps^(1/(order+2)) / scale, with scale the expected
    magnitude of k_1. That step alone is ill-conditioned when the variance
    is tiny relative to the squared mean (side lobe), so each order is
    evaluated on a geometric ladder of steps and the estimate from the most
    mutually consistent adjacent pair is returned.
    """
    if not 1 <= order <= 4:
        raise ValueError(f"order must be in 1..4, got {order}")
    if not scale > 0:
        raise ValueError(f"scale must be positive, got {scale!r}")

    def K(t: float) -> float:
        return math.log(mgf(t)) if t != 0.0 else 0.0

    def diff(n: int, h: float) -> float:
        if n == 1:
            return (K(h) - K(-h)) / (2.0 * h)
        if n == 2:
            return (K(h) + K(-h)) / (h * h)
        if n == 3:
            return (K(2 * h) - 2.0 * K(h) + 2.0 * K(-h) - K(2 * -h)) / (2.0 * h**3)
        return (K(2 * h) - 4.0 * K(h) + 6.0 * K(0.0) - 4.0 * K(-h) + K(-2 * h)) / h**4

    eps = float(np.finfo(float).eps)
    h0 = eps ** (1.0 / (order + 2)) / scale
    out: list[float] = []
    for n in range(1, order + 1):
        estimates: list[float] = []
        for j in range(10):
            try:
                estimates.append(diff(n, h0 * 4.0**j))
            except (MgfOverflowError, OverflowError, ValueError, QuadratureError):
                # the step has walked past where the mgf is evaluable
                break
        if len(estimates) < 2:
            raise MgfOverflowError(math.inf, EXP_CAP)
        best, best_score = estimates[0], math.inf
        for a, b in zip(estimates, estimates[1:]):
            score = abs(a - b) / max(abs(a), abs(b), 1e-300)
            if score < best_score:
                best, best_score = b, score
        out.append(best)
    return out
