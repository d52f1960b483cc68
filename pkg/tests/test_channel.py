import math

import numpy as np
import pytest

from txcap import (
    ChannelSpec,
    ConstantFading,
    DegenerateThresholdError,
    DomainError,
    FixedDistance,
    LognormalFading,
    NearestReceiver,
    RayleighFading,
    ToleranceSpec,
)
from txcap.channel import (
    avg_inversion_power,
    cond_moment_w,
    draw_distance,
    draw_psi,
    draw_signal_above,
    expect_distance,
    expect_psi,
    frac_moment_psi,
    mean_distance,
    mean_sq_distance,
    sample_signal_state,
    signal_ccdf,
    threshold_for_probability,
)

TIGHT = ToleranceSpec(rel_tol=1e-12, abs_tol=1e-15, max_iter=4000)


# ---------------------------------------------------------------------------
# Model construction
# ---------------------------------------------------------------------------

def test_spec_invariants():
    spec = ChannelSpec(alpha=4.0, beta=3.0, fading=RayleighFading(), distance=FixedDistance(5.0))
    assert spec.delta == 0.5
    assert spec.y * spec.beta == 1.0
    with pytest.raises(DomainError):
        ChannelSpec(alpha=2.0, beta=3.0, fading=RayleighFading(), distance=FixedDistance(5.0))
    with pytest.raises(DomainError):
        ChannelSpec(alpha=4.0, beta=0.0, fading=RayleighFading(), distance=FixedDistance(5.0))
    with pytest.raises(DomainError):
        LognormalFading(sigma=0.0)
    with pytest.raises(DomainError):
        NearestReceiver(lambda_prime=-1.0)


def test_lognormal_db_conversion():
    fading = LognormalFading.from_db(6.0)
    assert math.isclose(fading.sigma, math.log(10.0) / 10.0 * 6.0, rel_tol=1e-15)
    assert math.isclose(fading.sigma, 1.3815510557964274, rel_tol=1e-12)


# ---------------------------------------------------------------------------
# Fractional moments
# ---------------------------------------------------------------------------

def test_frac_moment_lognormal(lognormal_channel):
    # exp(delta^2 sigma^2 / 2) with sigma for 6 dB, either sign.
    expected = math.exp(0.5 * (0.5 * 1.3815510557964274) ** 2)
    assert math.isclose(frac_moment_psi(lognormal_channel, +1), expected, rel_tol=1e-12)
    assert math.isclose(frac_moment_psi(lognormal_channel, -1), expected, rel_tol=1e-12)
    assert math.isclose(expected, 1.2694521316234357, rel_tol=1e-12)


def test_frac_moment_rayleigh(rayleigh_channel):
    assert math.isclose(
        frac_moment_psi(rayleigh_channel, -1), math.sqrt(math.pi), rel_tol=1e-12
    )
    assert math.isclose(
        frac_moment_psi(rayleigh_channel, +1), math.gamma(1.5), rel_tol=1e-12
    )


def test_frac_moment_constant(nearest_channel):
    assert frac_moment_psi(nearest_channel, +1) == 1.0
    assert frac_moment_psi(nearest_channel, -1) == 1.0
    with pytest.raises(DomainError):
        frac_moment_psi(nearest_channel, 2)


def test_frac_moment_against_quadrature(lognormal_channel, rayleigh_channel):
    for spec in (lognormal_channel, rayleigh_channel):
        d = spec.delta
        for sign in (+1, -1):
            direct = expect_psi(spec.fading, lambda v: v ** (sign * d), tol=TIGHT)
            assert math.isclose(direct, frac_moment_psi(spec, sign), rel_tol=1e-9)


def test_frac_moment_empirical(lognormal_channel, rayleigh_channel):
    rng = np.random.default_rng(2024)
    n = 1_000_000
    for spec in (lognormal_channel, rayleigh_channel):
        samples = draw_psi(spec.fading, n, rng) ** spec.delta
        se = samples.std() / math.sqrt(n)
        assert abs(samples.mean() - frac_moment_psi(spec, +1)) < 4.0 * se


# ---------------------------------------------------------------------------
# Distances
# ---------------------------------------------------------------------------

def test_mean_sq_distance(nearest_channel, rayleigh_channel):
    assert mean_sq_distance(rayleigh_channel) == 25.0
    assert math.isclose(mean_sq_distance(nearest_channel), 1.0 / (0.01 * math.pi), rel_tol=1e-12)
    assert math.isclose(mean_sq_distance(nearest_channel), 31.830988618379067, rel_tol=1e-12)
    assert math.isclose(mean_distance(nearest_channel), 5.0, rel_tol=1e-12)


def test_nearest_distance_penalty(nearest_channel):
    ratio = mean_sq_distance(nearest_channel) / mean_distance(nearest_channel) ** 2
    assert math.isclose(ratio, 4.0 / math.pi, rel_tol=1e-12)


def test_empirical_mean_sq_distance(nearest_channel):
    rng = np.random.default_rng(7)
    d = draw_distance(nearest_channel.distance, 1_000_000, rng)
    assert abs((d * d).mean() - 31.830988618379067) / 31.830988618379067 < 0.01


# ---------------------------------------------------------------------------
# Signal strength tail and threshold map
# ---------------------------------------------------------------------------

def test_signal_ccdf_rayleigh(rayleigh_channel):
    w_half = math.log(2.0) / 625.0
    assert math.isclose(signal_ccdf(rayleigh_channel, w_half), 0.5, rel_tol=1e-12)
    assert math.isclose(signal_ccdf(rayleigh_channel, 1e-3), math.exp(-0.625), rel_tol=1e-12)


def test_signal_ccdf_constant_step():
    spec = ChannelSpec(
        alpha=4.0, beta=3.0, fading=ConstantFading(1.0), distance=FixedDistance(5.0)
    )
    w0 = 5.0**-4
    assert signal_ccdf(spec, 0.5 * w0) == 1.0
    assert signal_ccdf(spec, w0) == 0.0
    assert signal_ccdf(spec, 2.0 * w0) == 0.0


def test_signal_ccdf_nearest(nearest_channel):
    for w in (1e-4, 1e-3, 1e-2):
        expected = 1.0 - math.exp(-math.pi * 0.01 * w**-0.5)
        assert math.isclose(signal_ccdf(nearest_channel, w), expected, rel_tol=1e-12)


def test_signal_ccdf_domain(rayleigh_channel):
    with pytest.raises(DomainError):
        signal_ccdf(rayleigh_channel, 0.0)


def test_threshold_closed_forms(lognormal_channel, rayleigh_channel, nearest_channel):
    assert math.isclose(
        threshold_for_probability(rayleigh_channel, 0.5), math.log(2.0) / 625.0, rel_tol=1e-12
    )
    assert math.isclose(threshold_for_probability(lognormal_channel, 0.5), 5.0**-4, rel_tol=1e-9)
    t = threshold_for_probability(nearest_channel, 0.5)
    expected = (math.pi * 0.01 / (-math.log(0.5))) ** 2
    assert math.isclose(t, expected, rel_tol=1e-12)
    # Everyone transmits in the p -> 1 limit.
    assert threshold_for_probability(rayleigh_channel, 1.0 - 1e-12) < 1e-14


def test_threshold_round_trip(lognormal_channel, rayleigh_channel, nearest_channel):
    for spec in (lognormal_channel, rayleigh_channel, nearest_channel):
        for i in range(1, 100):
            p = i / 100.0
            t = threshold_for_probability(spec, p)
            assert abs(signal_ccdf(spec, t) - p) < 1e-9


def test_threshold_round_trip_mixed_model():
    mixed = ChannelSpec(
        alpha=4.0, beta=3.0, fading=RayleighFading(), distance=NearestReceiver(0.01)
    )
    for p in (0.05, 0.3, 0.7):
        t = threshold_for_probability(mixed, p)
        assert abs(signal_ccdf(mixed, t) - p) < 1e-7


def test_threshold_domain(rayleigh_channel):
    with pytest.raises(DomainError):
        threshold_for_probability(rayleigh_channel, 0.0)
    with pytest.raises(DomainError):
        threshold_for_probability(rayleigh_channel, 1.0)
    degenerate = ChannelSpec(
        alpha=4.0, beta=3.0, fading=ConstantFading(1.0), distance=FixedDistance(5.0)
    )
    with pytest.raises(DomainError):
        threshold_for_probability(degenerate, 0.5)


# ---------------------------------------------------------------------------
# Conditional moments
# ---------------------------------------------------------------------------

def test_cond_moment_rayleigh_at_zero(rayleigh_channel):
    assert math.isclose(
        cond_moment_w(rayleigh_channel, 0.0), 25.0 * math.sqrt(math.pi), rel_tol=1e-12
    )
    assert math.isclose(cond_moment_w(rayleigh_channel, 0.0), 44.311346272637895, rel_tol=1e-12)


def test_cond_moment_constant_fixed():
    spec = ChannelSpec(
        alpha=4.0, beta=3.0, fading=ConstantFading(1.0), distance=FixedDistance(5.0)
    )
    w0 = 5.0**-4
    assert cond_moment_w(spec, 0.5 * w0) == 25.0
    assert cond_moment_w(spec, 2.0 * w0) == 0.0


def test_cond_moment_lognormal_vanishes(lognormal_channel):
    assert cond_moment_w(lognormal_channel, 1e9) < 1e-12


def test_cond_moment_lognormal_value(lognormal_channel):
    # At t = r^-alpha the conditioning point sits at the median gain.
    sigma = 1.3815510557964274
    expected = 25.0 * math.exp(0.5 * (0.5 * sigma) ** 2) * 0.5 * math.erfc(0.5 * sigma / math.sqrt(2.0))
    got = cond_moment_w(lognormal_channel, 5.0**-4)
    assert math.isclose(got, expected, rel_tol=1e-12)
    assert math.isclose(got, 7.770738857369657, rel_tol=1e-12)


def test_cond_moment_matches_quadrature_at_zero(
    lognormal_channel, rayleigh_channel, nearest_channel
):
    for spec in (lognormal_channel, rayleigh_channel):
        direct = 25.0 * expect_psi(spec.fading, lambda v: v ** (-spec.delta), tol=TIGHT)
        assert math.isclose(direct, cond_moment_w(spec, 0.0), rel_tol=1e-6)
    direct = expect_distance(nearest_channel.distance, lambda d: d * d, tol=TIGHT)
    assert math.isclose(direct, cond_moment_w(nearest_channel, 0.0), rel_tol=1e-6)


def test_cond_moment_matches_quadrature_conditional(rayleigh_channel, nearest_channel):
    t = 1e-3
    direct = 25.0 * expect_psi(
        rayleigh_channel.fading, lambda v: v**-0.5, lower=t * 625.0, tol=TIGHT
    )
    assert math.isclose(direct, cond_moment_w(rayleigh_channel, t), rel_tol=1e-9)
    cap = (1.0 / t) ** 0.25
    direct = expect_distance(nearest_channel.distance, lambda d: d * d, upper=cap, tol=TIGHT)
    assert math.isclose(direct, cond_moment_w(nearest_channel, t), rel_tol=1e-9)


def test_cond_moment_monotone(lognormal_channel, rayleigh_channel, nearest_channel):
    for spec in (lognormal_channel, rayleigh_channel, nearest_channel):
        grid = [0.0] + list(np.geomspace(1e-5, 1e-1, 12))
        values = [cond_moment_w(spec, t) for t in grid]
        assert all(a >= b for a, b in zip(values, values[1:]))


def test_cond_moment_mixed_model_product():
    # Independent gain and distance: the unconditional moment factorizes.
    mixed = ChannelSpec(
        alpha=4.0, beta=3.0, fading=RayleighFading(), distance=NearestReceiver(0.01)
    )
    expected = math.sqrt(math.pi) * 31.830988618379067
    assert math.isclose(cond_moment_w(mixed, 0.0), expected, rel_tol=1e-6)


# ---------------------------------------------------------------------------
# Inversion power diagnostic
# ---------------------------------------------------------------------------

def test_avg_inversion_power_divergence(rayleigh_channel):
    assert avg_inversion_power(rayleigh_channel, 0.0) == math.inf
    finite = avg_inversion_power(rayleigh_channel, 1e-3)
    assert math.isfinite(finite) and finite > 0.0


def test_avg_inversion_power_lognormal(lognormal_channel):
    sigma = 1.3815510557964274
    expected = 625.0 * math.exp(0.5 * sigma**2)
    assert math.isclose(avg_inversion_power(lognormal_channel, 0.0), expected, rel_tol=1e-12)


def test_avg_inversion_power_nearest(nearest_channel):
    # 1/W = D^alpha; all moments of the nearest-receiver law are finite.
    direct = expect_distance(nearest_channel.distance, lambda d: d**4, tol=TIGHT)
    assert math.isclose(avg_inversion_power(nearest_channel, 0.0), direct, rel_tol=1e-9)


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------

def test_sample_signal_state_degenerate():
    spec = ChannelSpec(
        alpha=4.0, beta=3.0, fading=ConstantFading(2.0), distance=FixedDistance(5.0)
    )
    rng = np.random.default_rng(0)
    psi, d, w = sample_signal_state(spec, rng)
    assert (psi, d) == (2.0, 5.0)
    assert math.isclose(w, 2.0 * 5.0**-4, rel_tol=1e-15)


def test_sample_signal_state_rayleigh_mean(rayleigh_channel):
    rng = np.random.default_rng(11)
    psi = draw_psi(rayleigh_channel.fading, 1_000_000, rng)
    assert abs(psi.mean() - 1.0) < 3e-3


def test_conditional_draw_supports(rayleigh_channel, lognormal_channel, nearest_channel):
    rng = np.random.default_rng(5)
    for spec in (rayleigh_channel, lognormal_channel, nearest_channel):
        t = threshold_for_probability(spec, 0.25)
        _, _, w = draw_signal_above(spec, t, 20_000, rng)
        assert w.min() >= t
        # Conditional tail: P(W > w0 | W > t) matches the ratio of tails.
        w0 = threshold_for_probability(spec, 0.1)
        expected = 0.1 / 0.25
        observed = (w > w0).mean()
        se = math.sqrt(expected * (1.0 - expected) / 20_000)
        assert abs(observed - expected) < 4.0 * se


def test_conditional_draw_mixed_rejection():
    mixed = ChannelSpec(
        alpha=4.0, beta=3.0, fading=RayleighFading(), distance=NearestReceiver(0.01)
    )
    rng = np.random.default_rng(9)
    t = threshold_for_probability(mixed, 0.3)
    psi, d, w = draw_signal_above(mixed, t, 5_000, rng)
    assert w.min() > t
    assert np.allclose(w, psi * d**-4.0)


def test_conditional_draw_degenerate_threshold():
    spec = ChannelSpec(
        alpha=4.0, beta=3.0, fading=ConstantFading(1.0), distance=FixedDistance(5.0)
    )
    rng = np.random.default_rng(1)
    with pytest.raises(DegenerateThresholdError):
        draw_signal_above(spec, 1.0, 4, rng)
