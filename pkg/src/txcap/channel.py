"""Link models: fading and distance laws and the received signal strength.

The received signal strength of a transmitter-receiver pair is
``W = Psi * D**(-alpha)`` where ``Psi`` is the channel gain and ``D`` the
pair separation.  Three concrete model families are provided:

* constant gain (pure path loss),
* lognormal shadowing with fixed separation,
* unit-mean exponential gain (Rayleigh fading) with fixed separation,
* constant gain with the nearest-point distance law of a Poisson field of
  receivers (separations are treated as i.i.d. draws of that law).

Mixed configurations (random gain and random distance simultaneously) fall
back to quadrature for moments and to rejection sampling for conditional
draws.  Model objects are immutable; every sampler takes an explicit
generator, so there is no shared mutable state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np
from scipy.special import ndtri

from . import mathkit
from .errors import DegenerateThresholdError, DomainError
from .mathkit import ToleranceSpec

__all__ = [
    "ConstantFading",
    "LognormalFading",
    "RayleighFading",
    "FadingModel",
    "FixedDistance",
    "NearestReceiver",
    "DistanceModel",
    "ChannelSpec",
    "NetworkSpec",
    "frac_moment_psi",
    "mean_distance",
    "mean_sq_distance",
    "psi_ccdf",
    "distance_cdf",
    "expect_psi",
    "expect_distance",
    "signal_ccdf",
    "threshold_for_probability",
    "cond_moment_w",
    "avg_inversion_power",
    "sample_signal_state",
    "draw_psi",
    "draw_distance",
    "draw_signal_above",
]

_DEFAULT_TOL = ToleranceSpec()
_LN10_OVER_10 = math.log(10.0) / 10.0


# ---------------------------------------------------------------------------
# Model types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConstantFading:
    """Deterministic channel gain (no fading)."""

    psi: float = 1.0

    def __post_init__(self):
        if not (self.psi > 0.0):
            raise DomainError(f"constant gain must be positive, got {self.psi}")


@dataclass(frozen=True)
class LognormalFading:
    """Lognormal shadowing; ``sigma`` is the std deviation of log(Psi)."""

    sigma: float

    def __post_init__(self):
        if not (self.sigma > 0.0):
            raise DomainError(f"shadowing sigma must be positive, got {self.sigma}")

    @classmethod
    def from_db(cls, sigma_db: float) -> "LognormalFading":
        """Build from a dB-scale spread, converting to natural log units."""
        return cls(sigma=_LN10_OVER_10 * sigma_db)


@dataclass(frozen=True)
class RayleighFading:
    """Rayleigh fading: power gain is exponential with unit mean."""


FadingModel = Union[ConstantFading, LognormalFading, RayleighFading]


@dataclass(frozen=True)
class FixedDistance:
    """All pairs share the same separation ``r`` (meters)."""

    r: float

    def __post_init__(self):
        if not (self.r > 0.0):
            raise DomainError(f"pair separation must be positive, got {self.r}")


@dataclass(frozen=True)
class NearestReceiver:
    """Distance to the nearest point of a Poisson field of receivers.

    The separation CCDF is exp(-pi * lambda_prime * d^2); separations are
    sampled i.i.d. from that law.
    """

    lambda_prime: float

    def __post_init__(self):
        if not (self.lambda_prime > 0.0):
            raise DomainError(
                f"receiver density must be positive, got {self.lambda_prime}"
            )


DistanceModel = Union[FixedDistance, NearestReceiver]


@dataclass(frozen=True)
class ChannelSpec:
    """Channel model: path loss exponent, SIR threshold, gain and distance laws.

    ``delta = 2/alpha`` is the stability exponent of the aggregate
    interference and ``y = 1/beta`` the highest tolerable interference-to-
    signal ratio; both are derived so the defining identities hold exactly.
    """

    alpha: float
    beta: float
    fading: FadingModel
    distance: DistanceModel

    def __post_init__(self):
        if not (self.alpha > 2.0):
            raise DomainError(f"alpha must exceed 2, got {self.alpha}")
        if not (self.beta > 0.0):
            raise DomainError(f"beta must be positive, got {self.beta}")

    @property
    def delta(self) -> float:
        return 2.0 / self.alpha

    @property
    def y(self) -> float:
        return 1.0 / self.beta


@dataclass(frozen=True)
class NetworkSpec:
    """Potential-transmitter intensity (per unit area)."""

    density: float

    def __post_init__(self):
        if not (self.density > 0.0):
            raise DomainError(f"density must be positive, got {self.density}")


# ---------------------------------------------------------------------------
# Elementary distribution helpers
# ---------------------------------------------------------------------------

def psi_ccdf(fading: FadingModel, s: float) -> float:
    """P(Psi > s) for the gain law."""
    if s <= 0.0:
        return 1.0
    if isinstance(fading, ConstantFading):
        return 1.0 if fading.psi > s else 0.0
    if isinstance(fading, LognormalFading):
        return mathkit.std_normal_ccdf(math.log(s) / fading.sigma)
    return math.exp(-s)


def distance_cdf(distance: DistanceModel, d: float) -> float:
    """P(D <= d) for the separation law."""
    if d <= 0.0:
        return 0.0
    if isinstance(distance, FixedDistance):
        return 1.0 if distance.r <= d else 0.0
    return -math.expm1(-math.pi * distance.lambda_prime * d * d)


def expect_psi(
    fading: FadingModel,
    g: Callable[[float], float],
    lower: float = 0.0,
    tol: ToleranceSpec = _DEFAULT_TOL,
) -> float:
    """Restricted expectation E[g(Psi); Psi > lower]."""
    if isinstance(fading, ConstantFading):
        return g(fading.psi) if fading.psi > lower else 0.0
    if isinstance(fading, RayleighFading):
        return mathkit.integrate(lambda v: g(v) * math.exp(-v), max(lower, 0.0), math.inf, tol)
    sigma = fading.sigma

    # The normal density underflows to exactly zero past |z| ~ 39; cut the
    # integrand there so g is never evaluated where exp(sigma*z) overflows.
    def weighted(z: float) -> float:
        if abs(z) >= 42.0:
            return 0.0
        return g(math.exp(sigma * z)) * mathkit.std_normal_pdf(z)

    if lower > 0.0:
        z0 = math.log(lower) / sigma
        if z0 >= 0.0:
            return mathkit.integrate(weighted, z0, math.inf, tol)
        # Split at the mode so the bulk of the mass is anchored to a panel
        # edge; otherwise it can hide between quadrature nodes when z0 is
        # far in the left tail.
        left = mathkit.integrate(weighted, max(z0, -42.0), 0.0, tol)
        return left + mathkit.integrate(weighted, 0.0, math.inf, tol)
    # Unrestricted: fold the real line onto [0, inf) around z = 0.
    return mathkit.integrate(
        lambda z: weighted(z) + weighted(-z), 0.0, math.inf, tol
    )


def expect_distance(
    distance: DistanceModel,
    g: Callable[[float], float],
    upper: float = math.inf,
    tol: ToleranceSpec = _DEFAULT_TOL,
) -> float:
    """Restricted expectation E[g(D); D < upper]."""
    if isinstance(distance, FixedDistance):
        return g(distance.r) if distance.r < upper else 0.0
    rate = math.pi * distance.lambda_prime
    # Clip a huge finite limit to the effective support so the quadrature
    # panels are not dominated by regions where the density underflows.
    support = math.sqrt(745.0 / rate)
    if math.isfinite(upper):
        upper = min(upper, support)
    return mathkit.integrate(
        lambda x: g(x) * 2.0 * rate * x * math.exp(-rate * x * x), 0.0, upper, tol
    )


# ---------------------------------------------------------------------------
# Moments
# ---------------------------------------------------------------------------

def frac_moment_psi(spec: ChannelSpec, sign: int) -> float:
    """Fractional gain moment E[Psi**(sign * delta)] with sign in {+1, -1}.

    Closed forms: exp(delta^2 sigma^2 / 2) for lognormal shadowing (both
    signs), Gamma(1 +/- delta) for Rayleigh fading, psi**(+/-delta) for a
    constant gain.
    """
    if sign not in (1, -1):
        raise DomainError(f"sign must be +1 or -1, got {sign}")
    d = spec.delta
    fading = spec.fading
    if isinstance(fading, ConstantFading):
        return fading.psi ** (sign * d)
    if isinstance(fading, LognormalFading):
        return math.exp(0.5 * (d * fading.sigma) ** 2)
    return math.gamma(1.0 + sign * d)


def mean_distance(spec: ChannelSpec) -> float:
    """E[D]; equals 1/(2 sqrt(lambda')) under the nearest-receiver law."""
    dist = spec.distance
    if isinstance(dist, FixedDistance):
        return dist.r
    return 0.5 / math.sqrt(dist.lambda_prime)


def mean_sq_distance(spec: ChannelSpec) -> float:
    """E[D^2]; equals 1/(pi lambda') under the nearest-receiver law."""
    dist = spec.distance
    if isinstance(dist, FixedDistance):
        return dist.r * dist.r
    return 1.0 / (math.pi * dist.lambda_prime)


# ---------------------------------------------------------------------------
# Signal strength distribution
# ---------------------------------------------------------------------------

def signal_ccdf(spec: ChannelSpec, w: float, tol: ToleranceSpec = _DEFAULT_TOL) -> float:
    """Tail probability of the signal strength, P(W > w) for w > 0."""
    if not (w > 0.0):
        raise DomainError(f"signal_ccdf requires w > 0, got {w}")
    fading, dist = spec.fading, spec.distance
    if isinstance(dist, FixedDistance):
        return psi_ccdf(fading, w * dist.r**spec.alpha)
    if isinstance(fading, ConstantFading):
        # W > w iff D < (psi/w)^(1/alpha)
        return distance_cdf(dist, (fading.psi / w) ** (1.0 / spec.alpha))
    return expect_distance(dist, lambda x: psi_ccdf(fading, w * x**spec.alpha), tol=tol)


def threshold_for_probability(
    spec: ChannelSpec, p: float, tol: ToleranceSpec = _DEFAULT_TOL
) -> float:
    """Threshold t with P(W > t) = p, the scheduling level that thins to p.

    Closed forms per model; a degenerate (deterministic) W admits no such
    map and raises DomainError.
    """
    if not (0.0 < p < 1.0):
        raise DomainError(f"threshold_for_probability requires p in (0,1), got {p}")
    fading, dist = spec.fading, spec.distance
    if isinstance(dist, FixedDistance):
        ralpha = dist.r**spec.alpha
        if isinstance(fading, LognormalFading):
            return math.exp(fading.sigma * mathkit.std_normal_ccdf_inv(p)) / ralpha
        if isinstance(fading, RayleighFading):
            return -math.log(p) / ralpha
        raise DomainError("signal strength is deterministic; no threshold map exists")
    if isinstance(fading, ConstantFading):
        lam = dist.lambda_prime
        return fading.psi * (math.pi * lam / (-math.log1p(-p))) ** (1.0 / spec.delta)
    # Mixed randomness: invert the tail numerically (decreasing in t).
    hi = 1.0
    while signal_ccdf(spec, hi, tol) > p:
        hi *= 4.0
        if hi > 1e300:  # pragma: no cover
            raise DomainError("threshold search overflow")
    lo = hi / 1e6
    while signal_ccdf(spec, lo, tol) < p:
        lo /= 4.0
        if lo < 1e-300:  # pragma: no cover
            raise DomainError("threshold search underflow")
    return mathkit.find_root_monotone(lambda t: signal_ccdf(spec, t, tol) - p, lo, hi, tol)


def cond_moment_w(spec: ChannelSpec, t: float, tol: ToleranceSpec = _DEFAULT_TOL) -> float:
    """Restricted moment E[W**(-delta); W > t], continuous, nonincreasing in t.

    Since W**(-delta) = Psi**(-delta) D^2, closed forms exist whenever only
    one of gain/distance is random:

    * lognormal, fixed r:  r^2 exp((delta sigma)^2/2) Q(log(t r^alpha)/sigma + delta sigma)
    * Rayleigh, fixed r:   r^2 Gamma(1 - delta, t r^alpha)
    * constant gain, nearest receiver:
      psi^(-delta) (1 - (1 + u) e^(-u)) / (pi lambda'),  u = pi lambda' (psi/t)^delta
    """
    if t < 0.0:
        raise DomainError(f"cond_moment_w requires t >= 0, got {t}")
    d = spec.delta
    fading, dist = spec.fading, spec.distance
    if isinstance(dist, FixedDistance):
        r2 = dist.r**2
        s = t * dist.r**spec.alpha
        if isinstance(fading, ConstantFading):
            return fading.psi ** (-d) * r2 if fading.psi > s else 0.0
        if isinstance(fading, LognormalFading):
            sigma = fading.sigma
            if s == 0.0:
                return r2 * math.exp(0.5 * (d * sigma) ** 2)
            return (
                r2
                * math.exp(0.5 * (d * sigma) ** 2)
                * mathkit.std_normal_ccdf(math.log(s) / sigma + d * sigma)
            )
        return r2 * mathkit.upper_incomplete_gamma(1.0 - d, s, tol)
    if isinstance(fading, ConstantFading):
        lam = dist.lambda_prime
        scale = fading.psi ** (-d) / (math.pi * lam)
        if t == 0.0:
            return scale
        u = math.pi * lam * (fading.psi / t) ** d
        return scale * (1.0 - (1.0 + u) * math.exp(-u)) if u < 700.0 else scale
    # Mixed randomness: E_D[D^2 * E_Psi[Psi^(-delta); Psi > t D^alpha]].
    return expect_distance(
        dist,
        lambda x: x**2
        * expect_psi(fading, lambda v: v ** (-d), lower=t * x**spec.alpha, tol=tol),
        tol=tol,
    )


def avg_inversion_power(
    spec: ChannelSpec, t: float = 0.0, tol: ToleranceSpec = _DEFAULT_TOL
) -> float:
    """Mean transmit power E[1/W; W > t] under channel inversion.

    Diagnostic quantity: for Rayleigh fading with t = 0 the mean diverges
    and math.inf is returned rather than a spurious number.
    """
    if t < 0.0:
        raise DomainError(f"avg_inversion_power requires t >= 0, got {t}")
    fading, dist = spec.fading, spec.distance
    if isinstance(fading, RayleighFading) and t == 0.0:
        return math.inf
    if isinstance(dist, FixedDistance):
        ralpha = dist.r**spec.alpha
        s = t * ralpha
        if isinstance(fading, ConstantFading):
            w0 = fading.psi / ralpha
            return 1.0 / w0 if w0 > t else 0.0
        if isinstance(fading, LognormalFading):
            sigma = fading.sigma
            tail = (
                1.0
                if s == 0.0
                else mathkit.std_normal_ccdf(math.log(s) / sigma + sigma)
            )
            return ralpha * math.exp(0.5 * sigma**2) * tail
        return ralpha * mathkit.integrate(lambda v: math.exp(-v) / v, s, math.inf, tol)
    if isinstance(fading, ConstantFading):
        cap = math.inf if t == 0.0 else (fading.psi / t) ** (1.0 / spec.alpha)
        return expect_distance(dist, lambda x: x**spec.alpha, upper=cap, tol=tol) / fading.psi
    return expect_distance(
        dist,
        lambda x: x**spec.alpha
        * expect_psi(fading, lambda v: 1.0 / v, lower=t * x**spec.alpha, tol=tol),
        tol=tol,
    )


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------

def draw_psi(fading: FadingModel, n: int, rng: np.random.Generator) -> np.ndarray:
    """n i.i.d. gain draws."""
    if isinstance(fading, ConstantFading):
        return np.full(n, fading.psi)
    if isinstance(fading, LognormalFading):
        return np.exp(fading.sigma * rng.standard_normal(n))
    return rng.exponential(1.0, n)


def draw_distance(distance: DistanceModel, n: int, rng: np.random.Generator) -> np.ndarray:
    """n i.i.d. separation draws."""
    if isinstance(distance, FixedDistance):
        return np.full(n, distance.r)
    # D^2 is exponential with rate pi * lambda'.
    return np.sqrt(rng.exponential(1.0 / (math.pi * distance.lambda_prime), n))


def draw_signal_above(
    spec: ChannelSpec, t: float, n: int, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """n draws of (psi, d, w) conditioned on W > t, exact for t = 0 too.

    Uses inverse-CDF truncation for the single-random-source models so the
    conditional law is sampled exactly; mixed models fall back to batch
    rejection.
    """
    fading, dist = spec.fading, spec.distance
    if t <= 0.0:
        psi = draw_psi(fading, n, rng)
        d = draw_distance(dist, n, rng)
        return psi, d, psi * d ** (-spec.alpha)
    if isinstance(dist, FixedDistance):
        ralpha = dist.r**spec.alpha
        s = t * ralpha
        d = np.full(n, dist.r)
        if isinstance(fading, ConstantFading):
            if fading.psi <= s:
                raise DegenerateThresholdError(
                    f"threshold {t} leaves zero transmission probability"
                )
            psi = np.full(n, fading.psi)
            return psi, d, psi / ralpha
        if isinstance(fading, RayleighFading):
            psi = s + rng.exponential(1.0, n)  # memoryless tail
            return psi, d, psi / ralpha
        sigma = fading.sigma
        q0 = mathkit.std_normal_ccdf(math.log(s) / sigma)
        u = 1.0 - rng.random(n)  # in (0, 1], keeps the quantile finite
        z = -ndtri(u * q0)
        psi = np.exp(sigma * z)
        return psi, d, psi / ralpha
    if isinstance(fading, ConstantFading):
        d_cap = (fading.psi / t) ** (1.0 / spec.alpha)
        rate = math.pi * dist.lambda_prime
        f_cap = -math.expm1(-rate * d_cap * d_cap)
        u = 1.0 - rng.random(n)
        d = np.sqrt(-np.log1p(-u * f_cap) / rate)
        psi = np.full(n, fading.psi)
        return psi, d, psi * d ** (-spec.alpha)
    # Mixed randomness: batch rejection against the unconditional law.
    accept_rate = max(signal_ccdf(spec, t), 1e-12)
    psi_out = np.empty(n)
    d_out = np.empty(n)
    filled = 0
    for _ in range(10_000):
        batch = max(int((n - filled) / accept_rate * 1.2) + 16, 16)
        psi = draw_psi(fading, batch, rng)
        d = draw_distance(dist, batch, rng)
        keep = psi * d ** (-spec.alpha) > t
        k = min(int(keep.sum()), n - filled)
        psi_out[filled : filled + k] = psi[keep][:k]
        d_out[filled : filled + k] = d[keep][:k]
        filled += k
        if filled == n:
            return psi_out, d_out, psi_out * d_out ** (-spec.alpha)
    raise DegenerateThresholdError(
        f"conditional sampling at t={t} accepted too few draws"
    )


def sample_signal_state(
    spec: ChannelSpec, rng: np.random.Generator
) -> tuple[float, float, float]:
    """One unconditional draw of (psi, d, w) with w = psi * d**(-alpha)."""
    psi = float(draw_psi(spec.fading, 1, rng)[0])
    d = float(draw_distance(spec.distance, 1, rng)[0])
    return psi, d, psi * d ** (-spec.alpha)
