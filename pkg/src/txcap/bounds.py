"""Analytical outage, throughput, and transmission-capacity bounds.

Four operating policies are covered, the cross product of

* scheduling: random access (transmit with probability p) or threshold
  scheduling (transmit when the own-link strength W exceeds t), and
* power: unit power or channel inversion (power 1/W).

The engine rests on two quantities.  ``kappa`` aggregates the channel
randomness, ``kappa = pi E[Psi^delta] E[Psi^-delta] E[D^2]``, and
``theta = kappa * beta^delta`` rescales it by the SIR requirement.  Under
channel inversion the outage bounds are elementary functions of
``theta * mu``; without it they are expectations of the same functions over
the random per-link coefficient, evaluated by adaptive quadrature against
whichever of the gain or distance law is random.

The outage lower bound is the probability that at least one interferer is
individually strong enough to cause outage (a Poisson void probability, so
it is exact as a probability of that event); the upper bound adds a
Chebyshev estimate of the non-dominant aggregate and is clamped to 1
outside its validity region.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Union

from . import channel as ch
from .channel import (
    ChannelSpec,
    ConstantFading,
    FixedDistance,
    LognormalFading,
    NearestReceiver,
    RayleighFading,
)
from .errors import (
    DegenerateThresholdError,
    DomainError,
    UnsaturatedNetworkError,
    ValidityWindowError,
)
from .mathkit import (
    ToleranceSpec,
    find_root_monotone,
    lambert_w_m1,
    std_normal_ccdf_inv,
    upper_incomplete_gamma_inv,
)

__all__ = [
    "PowerControl",
    "RandomAccess",
    "ThresholdSchedule",
    "Scheduling",
    "PolicySpec",
    "PolicyFamily",
    "BoundSet",
    "OperatingPoint",
    "attempt_intensity",
    "kappa",
    "kappa_t",
    "theta",
    "theta_t",
    "chebyshev_validity_limit",
    "outage_bounds",
    "transmission_capacity_bounds",
    "gamma_of_t",
    "gamma_inverse",
    "optimal_random_access",
    "optimal_threshold",
    "asymptotic_ccdf_coeffs",
    "fading_tc_factor",
    "dispersion",
    "rate_to_sir_threshold",
]

_DEFAULT_TOL = ToleranceSpec()


# ---------------------------------------------------------------------------
# Policy types
# ---------------------------------------------------------------------------

class PowerControl(Enum):
    UNIT = "unit"
    INVERSION = "inversion"


@dataclass(frozen=True)
class RandomAccess:
    """Transmit independently with probability p in (0, 1]."""

    p: float

    def __post_init__(self):
        if not (0.0 < self.p <= 1.0):
            raise DomainError(f"transmission probability must be in (0,1], got {self.p}")


@dataclass(frozen=True)
class ThresholdSchedule:
    """Transmit when the own-link strength exceeds t >= 0."""

    t: float

    def __post_init__(self):
        if not (self.t >= 0.0):
            raise DomainError(f"scheduling threshold must be >= 0, got {self.t}")


Scheduling = Union[RandomAccess, ThresholdSchedule]


@dataclass(frozen=True)
class PolicySpec:
    """One concrete operating point: a scheduling rule plus a power rule."""

    scheduling: Scheduling
    power: PowerControl

    @property
    def is_threshold(self) -> bool:
        return isinstance(self.scheduling, ThresholdSchedule)

    @property
    def is_inversion(self) -> bool:
        return self.power is PowerControl.INVERSION


class PolicyFamily(Enum):
    """The four policy combinations, without their tuning parameter."""

    RA_NOPC = "ra_nopc"
    RA_CI = "ra_ci"
    TH_NOPC = "th_nopc"
    TH_CI = "th_ci"

    @property
    def threshold_scheduling(self) -> bool:
        return self in (PolicyFamily.TH_NOPC, PolicyFamily.TH_CI)

    @property
    def channel_inversion(self) -> bool:
        return self in (PolicyFamily.RA_CI, PolicyFamily.TH_CI)

    @classmethod
    def of(cls, policy: PolicySpec) -> "PolicyFamily":
        if policy.is_threshold:
            return cls.TH_CI if policy.is_inversion else cls.TH_NOPC
        return cls.RA_CI if policy.is_inversion else cls.RA_NOPC


@dataclass(frozen=True)
class BoundSet:
    """Outage and throughput bounds at one attempt intensity ``mu``.

    tau_upper = mu * (1 - q_lower) and tau_lower = mu * (1 - q_upper), so
    the throughput bounds are determined by the outage bounds.
    """

    q_lower: float
    q_upper: float
    tau_lower: float
    tau_upper: float
    mu: float

    def __post_init__(self):
        if not (-1e-12 <= self.q_lower <= self.q_upper + 1e-12 <= 1.0 + 2e-12):
            raise DomainError(
                f"inconsistent outage bounds: [{self.q_lower}, {self.q_upper}]"
            )


@dataclass(frozen=True)
class OperatingPoint:
    """Throughput-optimal random-access point implied by the upper bound."""

    mu_star: float
    tau_star: float
    eps_star: float


def attempt_intensity(spec: ChannelSpec, policy: PolicySpec, density: float) -> float:
    """Intensity of attempted transmissions: lambda*p, or lambda*P(W > t)."""
    if isinstance(policy.scheduling, RandomAccess):
        return density * policy.scheduling.p
    t = policy.scheduling.t
    if t == 0.0:
        return density
    thin = ch.signal_ccdf(spec, t)
    if thin <= 0.0:
        raise DegenerateThresholdError(f"threshold {t} deactivates every transmitter")
    return density * thin


# ---------------------------------------------------------------------------
# kappa / theta family
# ---------------------------------------------------------------------------

def kappa(spec: ChannelSpec) -> float:
    """Channel constant pi * E[Psi^delta] * E[Psi^-delta] * E[D^2] (area units)."""
    return (
        math.pi
        * ch.frac_moment_psi(spec, +1)
        * ch.frac_moment_psi(spec, -1)
        * ch.mean_sq_distance(spec)
    )


def kappa_t(spec: ChannelSpec, t: float, tol: ToleranceSpec = _DEFAULT_TOL) -> float:
    """Threshold variant of kappa, strictly decreasing in t with kappa_t(0) = kappa.

    kappa(t) = pi * E[Psi^delta] * E[W^-delta | W > t].
    """
    if t < 0.0:
        raise DomainError(f"kappa_t requires t >= 0, got {t}")
    if t == 0.0:
        return kappa(spec)
    tail = ch.signal_ccdf(spec, t, tol)
    if tail <= 0.0:
        raise DegenerateThresholdError(f"threshold {t} has zero tail probability")
    return math.pi * ch.frac_moment_psi(spec, +1) * ch.cond_moment_w(spec, t, tol) / tail


def theta(spec: ChannelSpec) -> float:
    """SIR-scaled channel constant kappa * beta^delta."""
    return kappa(spec) * spec.beta**spec.delta


def theta_t(spec: ChannelSpec, t: float, tol: ToleranceSpec = _DEFAULT_TOL) -> float:
    """SIR-scaled threshold constant kappa_t * beta^delta."""
    return kappa_t(spec, t, tol) * spec.beta**spec.delta


def chebyshev_validity_limit(delta: float) -> float:
    """Largest x = theta*mu for which the Chebyshev upper bound stays below 1."""
    if not (0.0 < delta < 1.0):
        raise DomainError(f"delta must be in (0,1), got {delta}")
    return (
        (1.0 - delta) * (5.0 - 3.0 * delta) / delta
        - math.sqrt(delta * (9.0 - 5.0 * delta))
    ) / (2.0 * (2.0 - delta))


def _chebyshev_factor(x: float, delta: float, limit: float) -> float:
    # Success-probability factor (1 - Var/(gap)^2)^+ of the upper bound;
    # identically zero at and beyond the validity limit.
    if x >= limit:
        return 0.0
    a = (delta / (2.0 - delta)) * x
    b = 1.0 - (delta / (1.0 - delta)) * x
    return max(1.0 - a / (b * b), 0.0)


# ---------------------------------------------------------------------------
# Outage bounds
# ---------------------------------------------------------------------------

def _ci_outage(x: float, delta: float) -> tuple[float, float]:
    # Channel-inversion bounds are elementary in x = theta * mu.
    limit = chebyshev_validity_limit(delta)
    q_lower = -math.expm1(-x)
    q_upper = 1.0 - _chebyshev_factor(x, delta, limit) * math.exp(-x)
    return q_lower, q_upper


def _nopc_success_expectations(
    spec: ChannelSpec, mu: float, t: float, tol: ToleranceSpec
) -> tuple[float, float]:
    """E[e^{-Theta mu}] and E[factor * e^{-Theta mu}] for unit power.

    Theta = pi E[Psi^delta] W^(-delta) beta^delta with W the (possibly
    threshold-conditioned) own-link strength.  The expectation runs over
    whichever of the gain or distance law is random; the upper-bound
    integrand vanishes wherever Theta*mu exceeds the Chebyshev limit, so
    the integration range is trimmed to the smooth region.
    """
    delta = spec.delta
    limit = chebyshev_validity_limit(delta)
    fading, dist = spec.fading, spec.distance
    bscale = spec.beta**delta

    if isinstance(dist, FixedDistance) and not isinstance(fading, ConstantFading):
        # Random gain: Theta*mu = amp * psi^(-delta), conditioning is psi > s.
        amp = math.pi * ch.frac_moment_psi(spec, +1) * dist.r**2 * bscale * mu
        s = t * dist.r**spec.alpha
        norm = ch.psi_ccdf(fading, s) if s > 0.0 else 1.0
        if norm <= 0.0:
            raise DegenerateThresholdError(f"threshold {t} has zero tail probability")
        x_of = lambda psi: amp * psi ** (-delta)
        lower_mean = ch.expect_psi(fading, lambda v: math.exp(-x_of(v)), s, tol) / norm
        psi_star = (amp / limit) ** (1.0 / delta)  # x >= limit iff psi <= psi_star
        upper_mean = (
            ch.expect_psi(
                fading,
                lambda v: _chebyshev_factor(x_of(v), delta, limit) * math.exp(-x_of(v)),
                max(s, psi_star),
                tol,
            )
            / norm
        )
        return lower_mean, upper_mean

    if isinstance(fading, ConstantFading) and isinstance(dist, NearestReceiver):
        # Random distance: Theta*mu = pi beta^delta mu d^2, conditioning is d < cap.
        amp = math.pi * bscale * mu
        cap = math.inf if t == 0.0 else (fading.psi / t) ** (1.0 / spec.alpha)
        norm = ch.distance_cdf(dist, cap) if math.isfinite(cap) else 1.0
        if norm <= 0.0:
            raise DegenerateThresholdError(f"threshold {t} has zero tail probability")
        x_of = lambda d: amp * d * d
        lower_mean = (
            ch.expect_distance(dist, lambda d: math.exp(-x_of(d)), cap, tol) / norm
        )
        d_star = math.sqrt(limit / amp)  # x >= limit iff d >= d_star
        upper_mean = (
            ch.expect_distance(
                dist,
                lambda d: _chebyshev_factor(x_of(d), delta, limit) * math.exp(-x_of(d)),
                min(cap, d_star),
                tol,
            )
            / norm
        )
        return lower_mean, upper_mean

    if isinstance(fading, ConstantFading) and isinstance(dist, FixedDistance):
        # Degenerate W: Theta is a constant, the bounds collapse to the
        # channel-inversion forms.
        w0 = fading.psi * dist.r ** (-spec.alpha)
        if t > 0.0 and w0 <= t:
            raise DegenerateThresholdError(f"threshold {t} deactivates every transmitter")
        x = math.pi * bscale * dist.r**2 * mu
        return math.exp(-x), _chebyshev_factor(x, delta, limit) * math.exp(-x)

    # Both laws random: nested quadrature over {psi > t d^alpha}.
    amp = math.pi * ch.frac_moment_psi(spec, +1) * bscale * mu
    norm = ch.signal_ccdf(spec, t, tol) if t > 0.0 else 1.0
    if norm <= 0.0:
        raise DegenerateThresholdError(f"threshold {t} has zero tail probability")

    def nested(g: Callable[[float], float]) -> float:
        return (
            ch.expect_distance(
                dist,
                lambda d: ch.expect_psi(
                    fading, lambda v: g(amp * d * d * v ** (-delta)), t * d**spec.alpha, tol
                ),
                tol=tol,
            )
            / norm
        )

    lower_mean = nested(lambda x: math.exp(-x))
    upper_mean = nested(lambda x: _chebyshev_factor(x, delta, limit) * math.exp(-x))
    return lower_mean, upper_mean


def outage_bounds(
    spec: ChannelSpec,
    policy: PolicySpec,
    density: float,
    tol: ToleranceSpec = _DEFAULT_TOL,
) -> BoundSet:
    """Outage and throughput bounds for one policy at transmitter density lambda."""
    if not (density > 0.0):
        raise DomainError(f"density must be positive, got {density}")
    mu = attempt_intensity(spec, policy, density)
    if policy.is_inversion:
        t = policy.scheduling.t if policy.is_threshold else 0.0
        scale = theta_t(spec, t, tol) if t > 0.0 else theta(spec)
        q_lower, q_upper = _ci_outage(scale * mu, spec.delta)
    else:
        t = policy.scheduling.t if policy.is_threshold else 0.0
        lower_mean, upper_mean = _nopc_success_expectations(spec, mu, t, tol)
        q_lower = min(max(1.0 - lower_mean, 0.0), 1.0)
        q_upper = min(max(1.0 - upper_mean, 0.0), 1.0)
    return BoundSet(
        q_lower=q_lower,
        q_upper=q_upper,
        tau_lower=mu * (1.0 - q_upper),
        tau_upper=mu * (1.0 - q_lower),
        mu=mu,
    )


# ---------------------------------------------------------------------------
# gamma(t) machinery for threshold scheduling
# ---------------------------------------------------------------------------

def gamma_of_t(
    spec: ChannelSpec, density: float, t: float, tol: ToleranceSpec = _DEFAULT_TOL
) -> float:
    """Normalized attempt intensity gamma(t) = theta(t) * mu(t).

    Simplifies to pi * lambda * beta^delta * E[Psi^delta] * E[W^-delta; W > t],
    monotone decreasing from theta*lambda at t = 0 down to 0.
    """
    if t < 0.0:
        raise DomainError(f"gamma_of_t requires t >= 0, got {t}")
    amp = math.pi * density * spec.beta**spec.delta * ch.frac_moment_psi(spec, +1)
    return amp * ch.cond_moment_w(spec, t, tol)


def gamma_inverse(
    spec: ChannelSpec, density: float, g: float, tol: ToleranceSpec = _DEFAULT_TOL
) -> float:
    """Threshold t with gamma(t) = g, for g in (0, gamma(0)).

    Closed forms: the normal quantile for lognormal shadowing, the inverse
    upper incomplete gamma for Rayleigh fading, and the lower Lambert W
    branch for the nearest-receiver law.
    """
    g_max = theta(spec) * density
    if not (0.0 < g < g_max):
        raise DomainError(f"gamma_inverse requires g in (0, {g_max!r}), got {g}")
    fading, dist = spec.fading, spec.distance
    d = spec.delta
    bscale = spec.beta**d
    if isinstance(dist, FixedDistance):
        r = dist.r
        if isinstance(fading, LognormalFading):
            sigma = fading.sigma
            scale = math.pi * r**2 * density * bscale * math.exp((d * sigma) ** 2)
            z = std_normal_ccdf_inv(g / scale, tol)
            return math.exp(sigma * z - d * sigma**2) / r**spec.alpha
        if isinstance(fading, RayleighFading):
            scale = math.pi * r**2 * density * bscale * math.gamma(1.0 + d)
            return upper_incomplete_gamma_inv(1.0 - d, g / scale, tol) / r**spec.alpha
    if isinstance(fading, ConstantFading) and isinstance(dist, NearestReceiver):
        lam = dist.lambda_prime
        w = lambert_w_m1(-math.exp(-1.0) * (1.0 - lam * g / (density * bscale)), tol)
        u = -(1.0 + w)
        return fading.psi * (math.pi * lam / u) ** (1.0 / d)
    # Generic: gamma is monotone decreasing, bracket and solve.
    hi = 1.0
    while gamma_of_t(spec, density, hi, tol) > g:
        hi *= 4.0
        if hi > 1e300:  # pragma: no cover
            raise DomainError("gamma_inverse bracket overflow")
    lo = hi / 4.0
    while lo > 1e-300 and gamma_of_t(spec, density, lo, tol) < g:
        lo /= 4.0  # gamma(lo) climbs toward gamma(0) = g_max > g
    if lo <= 1e-300:
        lo = 0.0
    return find_root_monotone(
        lambda t: gamma_of_t(spec, density, t, tol) - g, lo, hi, tol
    )


# ---------------------------------------------------------------------------
# Transmission capacity
# ---------------------------------------------------------------------------

def _invert_increasing(f, lo, hi, target, tol):
    # Cheap monotonicity probe before trusting the inversion.
    probe = [f(lo + (hi - lo) * u) for u in (0.25, 0.5, 0.75)]
    if not (probe[0] <= probe[1] + 1e-9 and probe[1] <= probe[2] + 1e-9):
        raise DomainError("bound is not monotone over the inversion bracket")
    return find_root_monotone(lambda v: f(v) - target, lo, hi, tol)


def transmission_capacity_bounds(
    spec: ChannelSpec,
    family: PolicyFamily,
    density: float,
    eps: float,
    tol: ToleranceSpec = _DEFAULT_TOL,
) -> tuple[float, float]:
    """Transmission-capacity bounds (c_lower, c_upper) at outage target eps.

    The capacity is nu(eps) * (1 - eps) where nu solves q(nu) = eps; the
    lower bound inverts the outage upper bound and vice versa.  eps must lie
    inside the window where the relevant bound is reachable with intensity
    at most lambda (equivalently threshold down to 0); outside it a
    ValidityWindowError names the window edge.
    """
    if not (0.0 < eps < 1.0):
        raise DomainError(f"eps must be in (0,1), got {eps}")
    if not (density > 0.0):
        raise DomainError(f"density must be positive, got {density}")
    delta = spec.delta

    if family is PolicyFamily.RA_CI:
        th = theta(spec)
        cap_l, cap_u = _ci_outage(th * density, delta)
        if eps > cap_u:
            raise ValidityWindowError(
                f"eps={eps} above the upper-bound window edge q_upper(lambda)={cap_u}"
            )
        if eps > cap_l:
            raise ValidityWindowError(
                f"eps={eps} above the lower-bound window edge q_lower(lambda)={cap_l}"
            )
        g_u = _invert_increasing(
            lambda g: _ci_outage(g, delta)[1], 0.0, th * density, eps, tol
        )
        c_lower = (g_u / th) * (1.0 - eps)
        c_upper = -(1.0 - eps) * math.log1p(-eps) / th
        return c_lower, c_upper

    if family is PolicyFamily.RA_NOPC:
        def q_low(mu):
            lower_mean, _ = _nopc_success_expectations(spec, mu, 0.0, tol)
            return 1.0 - lower_mean

        def q_up(mu):
            _, upper_mean = _nopc_success_expectations(spec, mu, 0.0, tol)
            return 1.0 - upper_mean

        cap_l, cap_u = q_low(density), q_up(density)
        if eps > cap_u:
            raise ValidityWindowError(
                f"eps={eps} above the upper-bound window edge q_upper(lambda)={cap_u}"
            )
        if eps > cap_l:
            raise ValidityWindowError(
                f"eps={eps} above the lower-bound window edge q_lower(lambda)={cap_l}"
            )
        mu_l = _invert_increasing(q_up, density * 1e-12, density, eps, tol)
        mu_u = _invert_increasing(q_low, density * 1e-12, density, eps, tol)
        return mu_l * (1.0 - eps), mu_u * (1.0 - eps)

    if family is PolicyFamily.TH_CI:
        th = theta(spec)
        g_max = th * density
        cap_l, cap_u = _ci_outage(g_max, delta)
        if eps > cap_u:
            raise ValidityWindowError(
                f"eps={eps} above the window edge q_upper(theta*lambda)={cap_u}"
            )
        if eps > cap_l:
            raise ValidityWindowError(
                f"eps={eps} above the window edge q_lower(theta*lambda)={cap_l}"
            )
        g_u = _invert_increasing(lambda g: _ci_outage(g, delta)[1], 0.0, g_max, eps, tol)
        g_l = -math.log1p(-eps)
        t_for_lower = gamma_inverse(spec, density, g_u, tol)
        t_for_upper = gamma_inverse(spec, density, g_l, tol)
        nu_l = density * ch.signal_ccdf(spec, t_for_lower, tol)
        nu_u = density * ch.signal_ccdf(spec, t_for_upper, tol)
        return nu_l * (1.0 - eps), nu_u * (1.0 - eps)

    # TH_NOPC: the bounds are decreasing functions of the threshold.
    def q_low_t(t):
        mu = density * (ch.signal_ccdf(spec, t, tol) if t > 0.0 else 1.0)
        lower_mean, _ = _nopc_success_expectations(spec, mu, t, tol)
        return 1.0 - lower_mean

    def q_up_t(t):
        mu = density * (ch.signal_ccdf(spec, t, tol) if t > 0.0 else 1.0)
        _, upper_mean = _nopc_success_expectations(spec, mu, t, tol)
        return 1.0 - upper_mean

    cap_l, cap_u = q_low_t(0.0), q_up_t(0.0)
    if eps > cap_u:
        raise ValidityWindowError(
            f"eps={eps} above the window edge q_upper(t=0)={cap_u}"
        )
    if eps > cap_l:
        raise ValidityWindowError(
            f"eps={eps} above the window edge q_lower(t=0)={cap_l}"
        )

    def solve_decreasing(qfun):
        hi = 1.0
        while qfun(hi) > eps:
            hi *= 4.0
            if hi > 1e300:  # pragma: no cover
                raise DomainError("threshold bracket overflow")
        return find_root_monotone(lambda t: qfun(t) - eps, 0.0, hi, tol)

    t_u = solve_decreasing(q_up_t)
    t_l = solve_decreasing(q_low_t)
    nu_l = density * (ch.signal_ccdf(spec, t_u, tol) if t_u > 0.0 else 1.0)
    nu_u = density * (ch.signal_ccdf(spec, t_l, tol) if t_l > 0.0 else 1.0)
    return nu_l * (1.0 - eps), nu_u * (1.0 - eps)


# ---------------------------------------------------------------------------
# Optimal operating points
# ---------------------------------------------------------------------------

def optimal_random_access(spec: ChannelSpec, density: float) -> OperatingPoint:
    """Maximizer of the random-access throughput upper bound mu*exp(-theta*mu).

    Requires the network to be saturated (lambda > 1/theta); the peak sits
    at mu = 1/theta with value 1/(e*theta), and the matching outage target
    maximizing the capacity upper bound is 1 - 1/e.
    """
    th = theta(spec)
    if not (density > 1.0 / th):
        raise UnsaturatedNetworkError(
            f"density {density} is below 1/theta = {1.0 / th}; the optimum is not interior"
        )
    return OperatingPoint(
        mu_star=1.0 / th, tau_star=1.0 / (math.e * th), eps_star=1.0 - 1.0 / math.e
    )


def optimal_threshold(
    spec: ChannelSpec, density: float, tol: ToleranceSpec = _DEFAULT_TOL
) -> float:
    """Threshold maximizing the scheduled throughput upper bound mu(t)e^{-gamma(t)}.

    Stationarity reduces to P(W > t) = t^delta / a with
    a = pi * lambda * beta^delta * E[Psi^delta]; the root is bracketed and
    polished on that residual.
    """
    a = math.pi * density * spec.beta**spec.delta * ch.frac_moment_psi(spec, +1)
    if not (a > 0.0):
        raise DomainError("nonpositive stationarity scale")

    def residual(t: float) -> float:
        return ch.signal_ccdf(spec, t, tol) - t**spec.delta / a

    lo = 1e-30
    hi = 1.0
    while residual(hi) > 0.0:
        hi *= 4.0
        if hi > 1e300:  # pragma: no cover
            raise DomainError("optimal threshold bracket overflow")
    return find_root_monotone(residual, lo, hi, tol)


# ---------------------------------------------------------------------------
# Asymptotics and small utilities
# ---------------------------------------------------------------------------

def asymptotic_ccdf_coeffs(spec: ChannelSpec, mu: float) -> tuple[float, float, float]:
    """Leading y^(-delta) coefficients of the interference tail.

    Returns (lower, exact, upper) = (kappa*mu, kappa*mu, 2/(2-delta)*kappa*mu);
    the upper/lower ratio is alpha/(alpha-1).
    """
    k = kappa(spec) * mu
    return k, k, 2.0 / (2.0 - spec.delta) * k


def fading_tc_factor(fading: ch.FadingModel, alpha: float) -> float:
    """Multiplicative capacity effect of channel randomness.

    1 / (E[Psi^delta] E[Psi^-delta]) in (0, 1], equal to 1 exactly when the
    gain is deterministic.
    """
    if not (alpha > 2.0):
        raise DomainError(f"alpha must exceed 2, got {alpha}")
    probe = ChannelSpec(alpha=alpha, beta=1.0, fading=fading, distance=FixedDistance(1.0))
    return 1.0 / (ch.frac_moment_psi(probe, +1) * ch.frac_moment_psi(probe, -1))


def dispersion(spec: ChannelSpec, mu: float, w: float | None = None) -> float:
    """Stable-law dispersion of the interference-to-signal ratio.

    gamma = Gamma(2-delta)/(1-delta) * cos(pi*delta/2) * kappa_w * mu, with
    kappa_w = pi E[Psi^delta] w^(-delta) when conditioning on signal power
    w, and kappa_w = kappa under channel inversion (w omitted).
    """
    d = spec.delta
    if not (d < 1.0):
        raise DomainError("dispersion requires delta < 1")
    factor = math.gamma(2.0 - d) / (1.0 - d) * math.cos(math.pi * d / 2.0)
    if w is None:
        scale = kappa(spec)
    else:
        if not (w > 0.0):
            raise DomainError(f"signal power must be positive, got {w}")
        scale = math.pi * ch.frac_moment_psi(spec, +1) * w ** (-d)
    return factor * scale * mu


def rate_to_sir_threshold(rate_bps_per_hz: float) -> float:
    """SIR threshold beta = 2^R - 1 equivalent to a spectral-efficiency target."""
    if not (rate_bps_per_hz > 0.0):
        raise DomainError(f"rate must be positive, got {rate_bps_per_hz}")
    return 2.0**rate_bps_per_hz - 1.0
