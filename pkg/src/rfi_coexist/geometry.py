"""Derived geometry of the spherical Earth cap exposed to the satellite.

The exposed cap is bounded by the polar angle theta_max = arccos(r_e / h)
measured from the sub-satellite axis. A cluster center at polar angle theta
sits at slant distance x(theta) = sqrt(r_e^2 + h^2 - 2 h r_e cos(theta)),
which maps area-uniform cap points to the linear radial density used by the
side-lobe integral.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .scenario import Scenario


@dataclass(frozen=True)
class GeometrySummary:
    d_min: float  # m, closest possible cluster (sub-satellite point)
    d_max: float  # m, cap rim distance
    d_ml: float  # m, slant distance of the main-lobe footprint center
    cap_area: float  # m^2, whole exposed cap
    footprint_area: float  # m^2, main-lobe footprint (from the scenario)
    lambda_ml: float  # expected clusters in the footprint
    lambda_cap: float  # expected clusters on the whole cap
    cos_theta_max: float  # r_e / h


def derive_geometry(s: Scenario) -> GeometrySummary:
    """Compute all derived distances, areas and expected cluster counts."""
    r, h = s.earth_radius, s.sat_center_distance
    sin_i = math.sin(s.incidence_angle)
    if h * sin_i >= r:
        raise DomainError(
            "no_ground_intersection: boresight at this incidence angle misses Earth"
        )
    d_min = h - r
    d_max = math.sqrt(h * h - r * r)
    d_ml = h * math.cos(s.incidence_angle) - math.sqrt(r * r - h * h * sin_i * sin_i)
    cap_area = 2.0 * math.pi * r * r * (1.0 - r / h)
    return GeometrySummary(
        d_min=d_min,
        d_max=d_max,
        d_ml=d_ml,
        cap_area=cap_area,
        footprint_area=s.footprint_area,
        lambda_ml=s.cluster_intensity * s.footprint_area,
        lambda_cap=s.cluster_intensity * cap_area,
        cos_theta_max=r / h,
    )


def distance_from_polar_angle(s: Scenario, theta: float) -> float:
    """Slant distance to the satellite of a cap point at polar angle theta."""
    r, h = s.earth_radius, s.sat_center_distance
    theta_max = math.acos(r / h)
    if not 0.0 <= theta <= theta_max + 1e-15:
        raise DomainError(
            f"polar angle {theta!r} outside exposed range [0, {theta_max!r}]"
        )
    return math.sqrt(r * r + h * h - 2.0 * h * r * math.cos(theta))


def radial_intensity_weight(s: Scenario, x: float) -> float:
    """Cluster intensity per unit slant distance: 2 pi (r_e/h) lambda_c x.

    Integrating over [d_min, d_max] recovers the expected cap cluster count.
    """
    r, h = s.earth_radius, s.sat_center_distance
    d_min, d_max = h - r, math.sqrt(h * h - r * r)
    if not d_min <= x <= d_max:
        raise DomainError(f"distance {x!r} outside [{d_min!r}, {d_max!r}]")
    return 2.0 * math.pi * (r / h) * s.cluster_intensity * x
