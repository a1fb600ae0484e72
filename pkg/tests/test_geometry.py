import math

import numpy as np
import pytest
from scipy.integrate import quad

from rfi_coexist import (
    DomainError,
    derive_geometry,
    distance_from_polar_angle,
    load_scenario,
    radial_intensity_weight,
)
from rfi_coexist.scenario import with_overrides

# Law-of-cosines at theta = 10 deg with the default Earth/orbit radii,
# evaluated by hand before wiring the test.
X_AT_10_DEG_M = 1_354_667.0203602621


def test_extreme_distances(default_geometry):
    geo = default_geometry
    assert geo.d_min == 685_000.0
    assert geo.d_max == pytest.approx(3_032_700.0, rel=5e-5)  # 4 significant figures
    assert geo.d_min < geo.d_ml < geo.d_max


def test_main_lobe_slant_distance(default_geometry):
    assert default_geometry.d_ml == pytest.approx(931_000.0, rel=2e-3)


def test_expected_cluster_counts(default_scenario, default_geometry):
    geo = default_geometry
    assert 2400 <= geo.lambda_cap <= 2500
    assert geo.lambda_cap == pytest.approx(2475.87, rel=1e-4)
    assert geo.lambda_ml == pytest.approx(
        default_scenario.cluster_intensity * default_scenario.footprint_area)
    assert geo.cap_area == pytest.approx(
        2 * math.pi * default_scenario.earth_radius**2
        * (1 - default_scenario.earth_radius / default_scenario.sat_center_distance))


def test_cap_area_change_of_variables_identity(default_scenario, default_geometry):
    s, geo = default_scenario, default_geometry
    ratio = s.earth_radius / s.sat_center_distance
    closed = math.pi * ratio * s.cluster_intensity * (geo.d_max**2 - geo.d_min**2)
    assert closed == pytest.approx(geo.lambda_cap, rel=1e-12)


def test_no_ground_intersection(default_scenario):
    steep = with_overrides(default_scenario, incidence_angle=1.2)
    with pytest.raises(DomainError, match="no_ground_intersection"):
        derive_geometry(steep)


def test_distance_from_polar_angle_boundaries(default_scenario, default_geometry):
    s, geo = default_scenario, default_geometry
    theta_max = math.acos(geo.cos_theta_max)
    assert distance_from_polar_angle(s, 0.0) == pytest.approx(geo.d_min, rel=1e-14)
    assert distance_from_polar_angle(s, theta_max) == pytest.approx(geo.d_max, rel=1e-14)
    assert distance_from_polar_angle(s, math.radians(10.0)) \
        == pytest.approx(X_AT_10_DEG_M, rel=1e-12)
    with pytest.raises(DomainError):
        distance_from_polar_angle(s, theta_max + 0.01)
    with pytest.raises(DomainError):
        distance_from_polar_angle(s, -0.01)


def test_distance_from_polar_angle_strictly_increasing(default_scenario, default_geometry):
    theta_max = math.acos(default_geometry.cos_theta_max)
    grid = np.linspace(0.0, theta_max, 200)
    values = [distance_from_polar_angle(default_scenario, t) for t in grid]
    assert all(a < b for a, b in zip(values, values[1:]))


def test_d_ml_consistent_with_polar_angle_parameterization(default_scenario, default_geometry):
    s, geo = default_scenario, default_geometry
    # Polar angle of the boresight ground point, from the same slant triangle.
    theta_ml = math.asin(
        s.sat_center_distance * math.sin(s.incidence_angle) / s.earth_radius
    ) - s.incidence_angle
    assert distance_from_polar_angle(s, theta_ml) == pytest.approx(geo.d_ml, rel=1e-9)


def test_radial_weight_integrates_to_cap_count(default_scenario, default_geometry):
    s, geo = default_scenario, default_geometry
    integral, _ = quad(lambda x: radial_intensity_weight(s, x), geo.d_min, geo.d_max,
                       epsabs=0.0, epsrel=1e-12)
    assert integral == pytest.approx(geo.lambda_cap, rel=1e-9)


def test_radial_weight_edge_cases(default_scenario, default_geometry):
    s, geo = default_scenario, default_geometry
    ratio = radial_intensity_weight(s, geo.d_max) / radial_intensity_weight(s, geo.d_min)
    assert ratio == pytest.approx(geo.d_max / geo.d_min, rel=1e-14)
    assert ratio == pytest.approx(4.427353594870709, rel=1e-12)

    empty = load_scenario({"network": {"cluster_intensity_per_km2": 0.0}})
    assert radial_intensity_weight(empty, geo.d_min) == 0.0

    with pytest.raises(DomainError):
        radial_intensity_weight(s, geo.d_min - 1.0)
    with pytest.raises(DomainError):
        radial_intensity_weight(s, geo.d_max + 1.0)
