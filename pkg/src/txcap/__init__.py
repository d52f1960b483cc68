"""Outage, throughput, and transmission-capacity analysis of Poisson
interference fields, with analytical bounds and a Monte Carlo validator."""

from .bounds import (
    BoundSet,
    OperatingPoint,
    PolicyFamily,
    PolicySpec,
    PowerControl,
    RandomAccess,
    ThresholdSchedule,
    asymptotic_ccdf_coeffs,
    attempt_intensity,
    chebyshev_validity_limit,
    dispersion,
    fading_tc_factor,
    gamma_inverse,
    gamma_of_t,
    kappa,
    kappa_t,
    optimal_random_access,
    optimal_threshold,
    outage_bounds,
    rate_to_sir_threshold,
    theta,
    theta_t,
    transmission_capacity_bounds,
)
from .channel import (
    ChannelSpec,
    ConstantFading,
    FixedDistance,
    LognormalFading,
    NearestReceiver,
    NetworkSpec,
    RayleighFading,
    avg_inversion_power,
    cond_moment_w,
    frac_moment_psi,
    mean_distance,
    mean_sq_distance,
    sample_signal_state,
    signal_ccdf,
    threshold_for_probability,
)
from .errors import (
    BracketError,
    ConfigError,
    DegenerateThresholdError,
    DomainError,
    QuadratureError,
    SaturationError,
    TxcapError,
    UnsaturatedNetworkError,
    ValidityWindowError,
)
from .mathkit import (
    ToleranceSpec,
    find_root_monotone,
    gamma_fn,
    integrate,
    lambert_w_m1,
    std_normal_ccdf,
    std_normal_ccdf_inv,
    upper_incomplete_gamma,
    upper_incomplete_gamma_inv,
)
from .sim import (
    FieldRealization,
    SimConfig,
    SimEstimate,
    TruncationReport,
    dominant_interferer_probability,
    ecf_stability_diagnostic,
    estimate_capacity,
    estimate_outage,
    has_dominant_interferer,
    reference_isr,
    sample_field,
    truncation_convergence_check,
)

__version__ = "0.1.0"
