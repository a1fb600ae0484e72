"""Statistics of aggregate terrestrial RFI brightness temperature at a
conically-scanning satellite radiometer: closed-form cumulants of a
clustered base-station process, a seeded Monte Carlo oracle, and a CLI."""

from .analytic import (
    CumulantSet,
    ThresholdVerdict,
    cgf_numeric_cumulants,
    cumulants_main_lobe,
    cumulants_side_lobe,
    mgf_cluster,
    mgf_cluster_series,
    mgf_main_lobe,
    mgf_side_lobe,
    t_cluster_unit,
    threshold_verdict,
)
from .combinatorics import bell_polynomial, p_n, stirling_table
from .errors import (
    AlphaRangeError,
    ConfigError,
    DomainError,
    MgfOverflowError,
    QuadratureError,
)
from .geometry import (
    GeometrySummary,
    derive_geometry,
    distance_from_polar_angle,
    radial_intensity_weight,
)
from .montecarlo import (
    McConfig,
    McEstimate,
    active_backend,
    estimate,
    k_statistics,
    run_trials,
    sample_main_lobe,
    sample_main_lobe_collapsed,
    sample_side_lobe,
)
from .scenario import (
    GainModel,
    Scenario,
    antenna_gain,
    dump_scenario,
    eta,
    load_scenario,
    load_scenario_file,
    omega,
    power_to_temperature,
)

__version__ = "0.1.0"
