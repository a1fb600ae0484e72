import math

import pytest

from rfi_coexist import (
    AlphaRangeError,
    MgfOverflowError,
    cgf_numeric_cumulants,
    cumulants_main_lobe,
    cumulants_side_lobe,
    derive_geometry,
    mgf_cluster,
    mgf_cluster_series,
    mgf_main_lobe,
    mgf_side_lobe,
    p_n,
    t_cluster_unit,
    threshold_verdict,
)
from rfi_coexist.scenario import with_overrides

# Frozen closed-form anchors at the default alpha = 2.0001 (hand-derived from
# eta = 1.056267e16 K, omega = 0.0168954 m, d_ml = 930972.7 m before coding).
MAIN_MEAN_100 = 55.562777613587635
MAIN_STD_100 = 139.59975104513896
SIDE_MEAN_50 = 0.4016640188060053
SIDE_MEAN_100 = 0.8033280376120105
SIDE_MEAN_200 = 1.606656075224021
SIDE_STD_100 = 0.022910355020602888


def bs(s, lam):
    return with_overrides(s, bs_intensity=lam)


def test_t_cluster_unit(default_scenario, default_geometry):
    s, geo = default_scenario, default_geometry
    main = t_cluster_unit(s, geo, "main", geo.d_ml)
    assert main == pytest.approx(3.48, rel=5e-3)  # ~3.48 K per BS near alpha = 2
    side = t_cluster_unit(s, geo, "side", geo.d_ml)
    assert side == pytest.approx(main * 10**-5.5, rel=1e-12)
    doubled = t_cluster_unit(s, geo, "main", 2 * geo.d_ml)
    assert doubled == pytest.approx(main / 4, rel=1e-3)  # inverse-square at alpha ~ 2
    with pytest.raises(ValueError):
        t_cluster_unit(s, geo, "main", 0.0)


def test_mgf_cluster_basics(default_scenario, default_geometry):
    s, geo = default_scenario, default_geometry
    assert mgf_cluster(s, geo.d_ml, 1.0, 0.0) == 1.0
    empty = bs(s, 0.0)
    assert mgf_cluster(empty, geo.d_ml, 1.0, 0.37) == 1.0

    # first derivative at 0 equals lam_bs * per-BS unit
    unit = t_cluster_unit(s, geo, "main", geo.d_ml)
    h = 1e-6 / unit
    fd = (mgf_cluster(s, geo.d_ml, 1.0, h) - mgf_cluster(s, geo.d_ml, 1.0, -h)) / (2 * h)
    assert fd == pytest.approx(s.bs_intensity * unit, rel=1e-6)


def test_mgf_cluster_overflow(default_scenario, default_geometry):
    s, geo = default_scenario, default_geometry
    with pytest.raises(MgfOverflowError, match="mgf_overflow"):
        mgf_cluster(s, geo.d_ml, 1.0, 1e6)


def test_mgf_cluster_series(default_scenario, default_geometry):
    s, geo = default_scenario, default_geometry
    assert mgf_cluster_series(s, geo.d_ml, 1.0, 0.123, order=0) == 1.0

    unit = t_cluster_unit(s, geo, "main", geo.d_ml)
    for lam in (50.0, 200.0):
        sl = bs(s, lam)
        for frac in (-0.01, 0.003, 0.01):
            # keep lam * u * t small so the order-12 tail is below 1e-9
            t = frac / (unit * lam)
            closed = mgf_cluster(sl, geo.d_ml, 1.0, t)
            series = mgf_cluster_series(sl, geo.d_ml, 1.0, t, order=12)
            assert series == pytest.approx(closed, rel=1e-9)

    # n = 2 coefficient is p_2(lam_bs) unit^2 / 2
    t = 0.001 / unit
    step = (mgf_cluster_series(s, geo.d_ml, 1.0, t, 2)
            - mgf_cluster_series(s, geo.d_ml, 1.0, t, 1))
    assert step == pytest.approx(p_n(2, s.bs_intensity) * (unit * t) ** 2 / 2, rel=1e-12)

    with pytest.raises(ValueError):
        mgf_cluster_series(s, geo.d_ml, 1.0, 0.0, order=21)


def test_mgf_main_lobe(default_scenario, default_geometry):
    s, geo = default_scenario, default_geometry
    assert mgf_main_lobe(s, geo, 0.0) == 1.0

    no_clusters = with_overrides(s, cluster_intensity=0.0)
    geo0 = derive_geometry(no_clusters)
    for t in (-0.5, 0.01, 0.2):
        assert mgf_main_lobe(no_clusters, geo0, t) == 1.0

    # compound-Poisson identity, exact by construction
    unit = t_cluster_unit(s, geo, "main", geo.d_ml)
    for t in (-0.1 / unit, 0.02 / unit):
        lhs = math.log(mgf_main_lobe(s, geo, t))
        rhs = geo.lambda_ml * (mgf_cluster(s, geo.d_ml, s.gain.main_lobe_gain, t) - 1.0)
        assert lhs == pytest.approx(rhs, rel=1e-14)


def test_mgf_side_lobe(default_scenario, default_geometry):
    s, geo = default_scenario, default_geometry
    assert mgf_side_lobe(s, geo, 0.0) == 1.0

    # vanishing side gain kills the integrand
    faint = with_overrides(s, gain=type(s.gain)(
        main_lobe_gain=1.0, side_lobe_gain=1e-30, half_beamwidth=s.gain.half_beamwidth))
    assert mgf_side_lobe(faint, geo, 5.0) == pytest.approx(1.0, abs=1e-12)

    # M_(sl)(t) >= 1 for t > 0 (integrand non-positive)
    for t in (1e-4, 0.1, 5.0):
        assert mgf_side_lobe(s, geo, t) >= 1.0

    with pytest.raises(ValueError):
        mgf_side_lobe(s, geo, 0.1, rel_tol=1e-3)


def test_cumulants_main_lobe_anchors(default_scenario, default_geometry):
    s, geo = default_scenario, default_geometry
    cs = cumulants_main_lobe(bs(s, 100.0), geo)
    assert cs.mean == pytest.approx(MAIN_MEAN_100, rel=1e-12)
    assert cs.std == pytest.approx(MAIN_STD_100, rel=1e-12)
    assert 20.0 <= cs.mean <= 100.0
    assert cs.skewness > 0 and cs.excess_kurtosis > 0
    assert cs.mu4 == pytest.approx(cs.k[3] + 3 * cs.k[1] ** 2, rel=1e-12)

    zero = cumulants_main_lobe(bs(s, 0.0), geo)
    assert all(k == 0.0 for k in zero.k)


def test_cumulants_side_lobe_anchors(default_scenario, default_geometry):
    s, geo = default_scenario, default_geometry
    for lam, want, exceeds in ((50.0, SIDE_MEAN_50, False),
                               (100.0, SIDE_MEAN_100, False),
                               (200.0, SIDE_MEAN_200, True)):
        cs = cumulants_side_lobe(bs(s, lam), geo)
        assert cs.mean == pytest.approx(want, rel=1e-12)
        verdict = threshold_verdict(cs, s.rfi_threshold)
        assert verdict.mean_exceeds is exceeds
        assert cs.skewness > 0 and cs.excess_kurtosis > 0
    cs100 = cumulants_side_lobe(bs(s, 100.0), geo)
    assert cs100.std == pytest.approx(SIDE_STD_100, rel=1e-12)


def test_side_lobe_mean_linear_in_bs_intensity(default_scenario, default_geometry):
    s, geo = default_scenario, default_geometry
    assert cumulants_side_lobe(bs(s, 200.0), geo).mean \
        == pytest.approx(2 * cumulants_side_lobe(bs(s, 100.0), geo).mean, rel=1e-12)


def test_alpha_guard_for_side_cumulants(default_scenario):
    with pytest.raises(AlphaRangeError):
        with_overrides(default_scenario, path_loss_exponent=2.0)


def test_scaling_laws(default_scenario, default_geometry):
    s, geo = default_scenario, default_geometry
    base = cumulants_main_lobe(s, geo)
    for c in (0.5, 3.0):
        gm = type(s.gain)(main_lobe_gain=c * s.gain.main_lobe_gain,
                          side_lobe_gain=s.gain.side_lobe_gain,
                          half_beamwidth=s.gain.half_beamwidth)
        scaled = cumulants_main_lobe(with_overrides(s, gain=gm), geo)
        for n, (kb, ks) in enumerate(zip(base.k, scaled.k), start=1):
            assert ks == pytest.approx(c**n * kb, rel=1e-12)

    denser = with_overrides(s, cluster_intensity=3 * s.cluster_intensity)
    scaled = cumulants_side_lobe(denser, derive_geometry(denser))
    for kb, ks in zip(cumulants_side_lobe(s, geo).k, scaled.k):
        assert ks == pytest.approx(3 * kb, rel=1e-12)

    doubled_eta = with_overrides(s, tx_power=2 * s.tx_power)
    scaled = cumulants_main_lobe(doubled_eta, geo)
    for n, (kb, ks) in enumerate(zip(base.k, scaled.k), start=1):
        assert ks == pytest.approx(2**n * kb, rel=1e-12)


def test_threshold_boundary_is_strict(default_scenario, default_geometry):
    cs = cumulants_side_lobe(default_scenario, default_geometry)
    verdict = threshold_verdict(cs, cs.mean)
    assert verdict.mean_exceeds is False


def test_cgf_finite_differences_on_poisson():
    lam = 3.0
    k = cgf_numeric_cumulants(lambda t: math.exp(lam * math.expm1(t)), 4, scale=lam)
    for kn in k:
        assert kn == pytest.approx(lam, rel=1e-4)


@pytest.mark.parametrize("alpha", [2.05])
def test_cgf_cross_checks_both_lobes(default_scenario, alpha):
    s = with_overrides(default_scenario, path_loss_exponent=alpha)
    geo = derive_geometry(s)

    cs = cumulants_main_lobe(s, geo)
    fd = cgf_numeric_cumulants(lambda t: mgf_main_lobe(s, geo, t), 2, scale=cs.mean)
    assert fd[0] == pytest.approx(cs.k[0], rel=1e-5)
    assert fd[1] == pytest.approx(cs.k[1], rel=1e-5)

    cs = cumulants_side_lobe(s, geo)
    fd = cgf_numeric_cumulants(lambda t: mgf_side_lobe(s, geo, t), 2, scale=cs.mean)
    assert fd[0] == pytest.approx(cs.k[0], rel=1e-5)
    assert fd[1] == pytest.approx(cs.k[1], rel=1e-5)


def test_first_cgf_derivative_matches_mean_everywhere(default_scenario, default_geometry):
    # d/dt log M at 0 equals the closed-form mean for both lobes
    s, geo = default_scenario, default_geometry
    for maker, closed in ((mgf_main_lobe, cumulants_main_lobe),
                          (mgf_side_lobe, cumulants_side_lobe)):
        cs = closed(s, geo)
        fd = cgf_numeric_cumulants(lambda t: maker(s, geo, t), 1, scale=cs.mean)
        assert fd[0] == pytest.approx(cs.mean, rel=1e-6)
