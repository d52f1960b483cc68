"""Scalar special functions, adaptive quadrature, and bracketed root finding.

All routines are pure functions of their inputs and are safe for concurrent
use.  Accuracy targets are expressed through :class:`ToleranceSpec`; the
defaults are tight enough for every consumer in this package.

Implementation notes
--------------------
* Quadrature is adaptive Gauss-Kronrod (7-15 pair) with worst-interval-first
  subdivision.  A semi-infinite upper limit is mapped onto [0, 1) via
  ``v = lo + u / (1 - u)``.
* The inverse functions (normal quantile, inverse upper incomplete gamma,
  Lambert W on the lower branch) are computed by bracketed bisection followed
  by Newton/Halley polishing of the defining residual.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

from .errors import BracketError, DomainError, QuadratureError

__all__ = [
    "ToleranceSpec",
    "std_normal_ccdf",
    "std_normal_pdf",
    "std_normal_ccdf_inv",
    "gamma_fn",
    "upper_incomplete_gamma",
    "upper_incomplete_gamma_inv",
    "lambert_w_m1",
    "integrate",
    "find_root_monotone",
]

_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class ToleranceSpec:
    """Accuracy contract for iterative numerics.

    rel_tol and abs_tol bound the acceptable relative/absolute error,
    max_iter bounds the refinement count of adaptive loops.
    """

    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_iter: int = 200

    def __post_init__(self):
        if not (self.rel_tol > 0.0):
            raise DomainError(f"rel_tol must be positive, got {self.rel_tol}")
        if not (self.abs_tol > 0.0):
            raise DomainError(f"abs_tol must be positive, got {self.abs_tol}")
        if self.max_iter < 1:
            raise DomainError(f"max_iter must be at least 1, got {self.max_iter}")


_DEFAULT_TOL = ToleranceSpec()


# ---------------------------------------------------------------------------
# Standard normal tail
# ---------------------------------------------------------------------------

def std_normal_ccdf(z: float) -> float:
    """Tail probability Q(z) = P(Z > z) of a standard normal variable."""
    if not math.isfinite(z):
        raise DomainError(f"std_normal_ccdf requires finite z, got {z}")
    return 0.5 * math.erfc(z / _SQRT2)


def std_normal_pdf(z: float) -> float:
    """Density of the standard normal distribution."""
    return _INV_SQRT_2PI * math.exp(-0.5 * z * z)


def std_normal_ccdf_inv(p: float, tol: ToleranceSpec = _DEFAULT_TOL) -> float:
    """Quantile z with Q(z) = p, for p in (0, 1).

    Bracketed bisection down to a narrow interval, then Newton polish on
    Q(z) - p (the derivative of Q is the negative normal density).
    """
    if not (0.0 < p < 1.0):
        raise DomainError(f"std_normal_ccdf_inv requires p in (0,1), got {p}")
    if p == 0.5:
        return 0.0
    # Q is decreasing: grow a sign-change bracket outward from the origin.
    lo, hi = -1.0, 1.0
    while std_normal_ccdf(hi) > p:
        lo = hi
        hi *= 2.0
        if hi > 1e3:  # pragma: no cover - p bounded away from 0 in doubles
            break
    while std_normal_ccdf(lo) < p:
        hi = lo
        lo *= 2.0
        if lo < -1e3:  # pragma: no cover
            break
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if std_normal_ccdf(mid) > p:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-3:
            break
    z = 0.5 * (lo + hi)
    for _ in range(tol.max_iter):
        q = std_normal_ccdf(z)
        step = (q - p) / std_normal_pdf(z)
        z += step
        if abs(step) <= tol.rel_tol * max(abs(z), 1e-30):
            break
    return z


# ---------------------------------------------------------------------------
# Gamma family
# ---------------------------------------------------------------------------

def gamma_fn(a: float) -> float:
    """Gamma function on the positive real axis."""
    if not (a > 0.0) or not math.isfinite(a):
        raise DomainError(f"gamma_fn requires a > 0, got {a}")
    return math.gamma(a)


def _lower_gamma_series(a: float, x: float, tol: ToleranceSpec) -> float:
    # gamma(a, x) (lower) via its power series; good for x < a + 1.
    term = 1.0 / a
    total = term
    denom = a
    for _ in range(tol.max_iter * 5):
        denom += 1.0
        term *= x / denom
        total += term
        if abs(term) < abs(total) * 1e-17:
            break
    return total * math.exp(-x + a * math.log(x))


def _upper_gamma_cf(a: float, x: float, tol: ToleranceSpec) -> float:
    # Gamma(a, x) via the Lentz continued fraction; good for x >= a + 1.
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b if b != 0.0 else 1.0 / tiny
    h = d
    for i in range(1, tol.max_iter * 5):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    return math.exp(-x + a * math.log(x)) * h


def upper_incomplete_gamma(a: float, x: float, tol: ToleranceSpec = _DEFAULT_TOL) -> float:
    """Upper incomplete gamma integral over [x, inf) of v^(a-1) e^(-v) dv."""
    if not (a > 0.0):
        raise DomainError(f"upper_incomplete_gamma requires a > 0, got {a}")
    if not (x >= 0.0):
        raise DomainError(f"upper_incomplete_gamma requires x >= 0, got {x}")
    if x == 0.0:
        return math.gamma(a)
    if -x + a * math.log(x) < -745.0:
        return 0.0  # prefactor underflows; the tail is numerically zero
    if x < a + 1.0:
        return math.gamma(a) - _lower_gamma_series(a, x, tol)
    return _upper_gamma_cf(a, x, tol)


def upper_incomplete_gamma_inv(a: float, y: float, tol: ToleranceSpec = _DEFAULT_TOL) -> float:
    """Solve Gamma(a, x) = y for x, with 0 < y <= Gamma(a).

    Bracketed bisection plus Newton polish on the residual; the derivative
    of the upper incomplete gamma in x is -x^(a-1) e^(-x).
    """
    if not (a > 0.0):
        raise DomainError(f"upper_incomplete_gamma_inv requires a > 0, got {a}")
    full = math.gamma(a)
    if not (0.0 < y <= full):
        raise DomainError(
            f"upper_incomplete_gamma_inv requires y in (0, Gamma(a)] = (0, {full!r}], got {y}"
        )
    if y == full:
        return 0.0
    lo, hi = 0.0, 1.0
    while upper_incomplete_gamma(a, hi, tol) > y:
        lo = hi
        hi *= 2.0
        if hi > 1e300:  # pragma: no cover
            raise BracketError("no finite bracket for upper_incomplete_gamma_inv")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if upper_incomplete_gamma(a, mid, tol) > y:
            lo = mid
        else:
            hi = mid
        if hi - lo <= tol.rel_tol * max(hi, 1e-300):
            break
    x = 0.5 * (lo + hi)
    for _ in range(6):
        if x <= 0.0:
            break
        deriv = -math.exp((a - 1.0) * math.log(x) - x)
        if deriv == 0.0:
            break
        step = (upper_incomplete_gamma(a, x, tol) - y) / deriv
        nxt = x - step
        if nxt <= 0.0:
            break
        x = nxt
        if abs(step) <= tol.rel_tol * x:
            break
    return x


# ---------------------------------------------------------------------------
# Lambert W, lower branch
# ---------------------------------------------------------------------------

def lambert_w_m1(x: float, tol: ToleranceSpec = _DEFAULT_TOL) -> float:
    """Lower (k = -1) branch of Lambert W: the solution w <= -1 of w e^w = x.

    Defined for x in [-1/e, 0).  Bisection on the monotone restriction of
    w e^w to (-inf, -1], then Halley polish of the residual.
    """
    branch_point = -math.exp(-1.0)
    if not (branch_point <= x < 0.0):
        # Grant one ulp of grace below the branch point so that round-tripped
        # arguments like -exp(-1) evaluated in floating point stay valid.
        if x < branch_point and x >= branch_point * (1.0 + 1e-14):
            x = branch_point
        else:
            raise DomainError(f"lambert_w_m1 requires x in [-1/e, 0), got {x}")
    if x == branch_point:
        return -1.0

    def wexp(w: float) -> float:
        return w * math.exp(w)

    lo, hi = -2.0, -1.0  # wexp decreasing from 0- to -1/e on (-inf, -1]
    while wexp(lo) < x:
        hi = lo
        lo *= 2.0
        if lo < -750.0:  # pragma: no cover - x bounded away from 0
            break
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if wexp(mid) < x:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-4:
            break
    w = 0.5 * (lo + hi)
    for _ in range(tol.max_iter):
        ew = math.exp(w)
        f = w * ew - x
        if f == 0.0:
            break
        fp = ew * (1.0 + w)
        fpp = ew * (2.0 + w)
        step = f / (fp - 0.5 * f * fpp / fp)
        w -= step
        if abs(step) <= tol.rel_tol * abs(w):
            break
    return w


# ---------------------------------------------------------------------------
# Adaptive Gauss-Kronrod quadrature
# ---------------------------------------------------------------------------

# 15-point Kronrod extension of the 7-point Gauss rule (positive abscissae).
_XGK = (
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
)
_WGK = (
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
)
_WG = (
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
)


def _gk15(f: Callable[[float], float], a: float, b: float) -> tuple[float, float]:
    """One Gauss-Kronrod 7-15 panel; returns (integral, error estimate)."""
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    fc = f(center)
    result_k = _WGK[7] * fc
    result_g = _WG[3] * fc
    for j in range(7):
        dx = half * _XGK[j]
        f1 = f(center - dx)
        f2 = f(center + dx)
        result_k += _WGK[j] * (f1 + f2)
        if j % 2 == 1:  # Kronrod abscissae 1, 3, 5 are the Gauss-7 points
            result_g += _WG[j // 2] * (f1 + f2)
    result_k *= half
    result_g *= half
    return result_k, abs(result_k - result_g)


def integrate(
    f: Callable[[float], float],
    lower: float,
    upper: float,
    tol: ToleranceSpec = _DEFAULT_TOL,
) -> float:
    """Adaptive quadrature of ``f`` over [lower, upper], upper may be +inf.

    The semi-infinite case substitutes v = lower + u/(1-u) so that the whole
    tail is covered by u in [0, 1); Kronrod abscissae are strictly interior,
    so the transformed integrand is never evaluated at u = 1.

    Raises QuadratureError (carrying the partial estimate) if the error
    target is not met within ``tol.max_iter`` subdivisions.
    """
    if math.isnan(lower) or math.isnan(upper):
        raise DomainError("integration limits must not be NaN")
    if upper == lower:
        return 0.0
    if math.isinf(upper):
        lo = lower

        def transformed(u: float) -> float:
            onemu = 1.0 - u
            return f(lo + u / onemu) / (onemu * onemu)

        return _integrate_finite(transformed, 0.0, 1.0, tol)
    if upper < lower:
        return -integrate(f, upper, lower, tol)
    return _integrate_finite(f, lower, upper, tol)


def _integrate_finite(f, a: float, b: float, tol: ToleranceSpec) -> float:
    value, err = _gk15(f, a, b)
    # Max-heap on panel error via negated keys; counter breaks ties.
    heap = [(-err, 0, a, b, value, err)]
    total = value
    total_err = err
    counter = 1
    for split in range(tol.max_iter):
        # A few unconditional splits guard against sharp features sitting
        # between the nodes of the first panel.
        if split >= 4 and total_err <= max(tol.abs_tol, tol.rel_tol * abs(total)):
            return total
        neg_err, _, pa, pb, pval, perr = heapq.heappop(heap)
        mid = 0.5 * (pa + pb)
        v1, e1 = _gk15(f, pa, mid)
        v2, e2 = _gk15(f, mid, pb)
        total += (v1 + v2) - pval
        total_err += (e1 + e2) - perr
        heapq.heappush(heap, (-e1, counter, pa, mid, v1, e1))
        counter += 1
        heapq.heappush(heap, (-e2, counter, mid, pb, v2, e2))
        counter += 1
    if total_err <= max(tol.abs_tol, tol.rel_tol * abs(total)):
        return total
    raise QuadratureError("quadrature failed to converge", total, total_err)


# ---------------------------------------------------------------------------
# Root finding
# ---------------------------------------------------------------------------

def find_root_monotone(
    f: Callable[[float], float],
    bracket_lo: float,
    bracket_hi: float,
    tol: ToleranceSpec = _DEFAULT_TOL,
) -> float:
    """Root of a continuous monotone ``f`` inside [bracket_lo, bracket_hi].

    Requires a sign change across the bracket (BracketError otherwise).
    Brent-style iteration: inverse quadratic / secant steps guarded by
    bisection.  Terminates when |f| <= abs_tol or the bracket width drops
    below rel_tol * |root|.
    """
    a, b = float(bracket_lo), float(bracket_hi)
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0.0:
        raise BracketError(
            f"no sign change on [{bracket_lo}, {bracket_hi}]: f(lo)={fa!r}, f(hi)={fb!r}"
        )
    if abs(fa) < abs(fb):
        a, b, fa, fb = b, a, fb, fa
    c, fc = a, fa
    d = e = b - a
    for _ in range(max(tol.max_iter, 100)):
        if fb * fc > 0.0:
            c, fc = a, fa
            d = e = b - a
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        tol1 = 2.0 * 2.220446049250313e-16 * abs(b) + 0.5 * tol.rel_tol * max(abs(b), tol.abs_tol)
        xm = 0.5 * (c - b)
        if abs(xm) <= tol1 or fb == 0.0 or abs(fb) <= tol.abs_tol:
            return b
        if abs(e) >= tol1 and abs(fa) > abs(fb):
            s = fb / fa
            if a == c:
                p = 2.0 * xm * s
                q = 1.0 - s
            else:
                q = fa / fc
                r = fb / fc
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0))
                q = (q - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0.0:
                q = -q
            p = abs(p)
            if 2.0 * p < min(3.0 * xm * q - abs(tol1 * q), abs(e * q)):
                e = d
                d = p / q
            else:
                d = xm
                e = d
        else:
            d = xm
            e = d
        a, fa = b, fb
        b += d if abs(d) > tol1 else math.copysign(tol1, xm)
        fb = f(b)
    return b
