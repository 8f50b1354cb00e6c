"""Piecewise analytic coordinate-space wavefunctions u(r), w(r).

The compact spherical-Bessel form factors split the radial line into
three analytic regions with boundaries at b2-b1 and b1+b2:

  inner   r <= b2-b1 : growing solutions  (alpha r) i_l(alpha r)
  middle  in between : particular + homogeneous mix
  outer   r >= b1+b2 : decaying solutions (alpha r) k_l(alpha r)

For equal ranges the inner interval is empty and the middle branch covers
[0, 2b].  Two numerical traps hide in the D-channel middle bracket and are
handled by exact algebraic regroupings rather than extra precision:

* the 1/(alpha r)^2 pieces of the bracket cancel analytically; the
  combination g(x) = x*k2(x) - 3/x^2 + 1/2 = x^2/8 - x^3/15 + ... is
  evaluated by series below x = 0.5 (closed form loses ~4 digits there,
  all of them near the origin);
* the r-independent bracket coefficients are differences of O(1)
  quantities that shrink like (b2-b1)^2 and (b2-b1)^4; they are
  rearranged into explicitly small factors (sinh(y)-y and
  sinh^2(y/2)-(y/2)^2 groupings) so nearly-equal ranges keep full
  precision.

The inner D-channel coefficient carries a minus sign: the direct
numerical transform of the momentum wavefunction is negative below
b2-b1, and continuity with the middle branch at r = b2-b1 fixes the
same sign.  The inner D-wave dips below zero whenever b1 != b2.

Branch evaluators are exposed individually (`branch_value`) because the
continuity suite and the one-sided derivatives need each formula's
natural analytic continuation slightly outside its own region.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass

import numpy as np

from .model import ModelParams, Region, region_of
from .quadrature import differentiate
from .specfun import mod_sph_bessel_i, mod_sph_bessel_k

#: default step for Richardson derivative stencils (fm)
DERIVATIVE_STEP = 1e-3

_SERIES_CUT = 0.5


@dataclass(frozen=True)
class RadialSample:
    """One radial sample: r in fm, u and w in fm^-1/2."""

    r: float
    u: float
    w: float
    region: Region


# ---------------------------------------------------------------------------
# stable scalar helpers for the bracket coefficients

def _sinh_minus(y: float) -> float:
    """sinh(y) - y without cancellation (series below 0.5)."""
    if abs(y) >= _SERIES_CUT:
        return math.sinh(y) - y
    acc = 0.0
    term = y**3 / 6.0
    for n in range(1, 9):
        acc += term
        term *= y * y / ((2 * n + 2) * (2 * n + 3))
    return acc


def _sinh_sq_minus(t: float) -> float:
    """sinh(t)^2 - t^2, factored as (sinh t - t)(sinh t + t)."""
    return _sinh_minus(t) * (math.sinh(t) + t)


# ---------------------------------------------------------------------------
# array-aware radial profile pieces, valid for any real argument so the
# derivative stencils may cross r = 0

def _xi2(x):
    """x * i2(x); odd entire function, series below |x| = 0.5."""
    xa = np.asarray(x, dtype=float)
    out = np.empty_like(xa)
    small = np.abs(xa) < _SERIES_CUT
    if np.any(small):
        xs = xa[small]
        x2 = xs * xs
        acc = np.ones_like(xs)
        term = np.ones_like(xs)
        for n in range(11):
            term = term * x2 / (2.0 * (n + 1) * (2 * n + 7))
            acc = acc + term
        out[small] = xs * x2 / 15.0 * acc
    if np.any(~small):
        xb = xa[~small]
        out[~small] = ((xb * xb + 3.0) * np.sinh(xb) - 3.0 * xb * np.cosh(xb)) / (xb * xb)
    return out


def _xk2(x):
    """x * k2(x) = exp(-x)*(1 + 3/x + 3/x^2); needs x > 0."""
    xa = np.asarray(x, dtype=float)
    return np.exp(-xa) * (1.0 + 3.0 / xa + 3.0 / (xa * xa))


# g(x) = x*k2(x) - 3/x^2 + 1/2: the 1/x^2 poles of the middle bracket
# cancel inside this combination.  Series sum_{m>=2} (-1)^m (m^2-1)/(m+2)! x^m.
_G_COEFFS = np.array(
    [0.0, 0.0] + [(-1.0) ** m * (m * m - 1) / math.factorial(m + 2) for m in range(2, 17)]
)


def _g(x):
    xa = np.asarray(x, dtype=float)
    out = np.empty_like(xa)
    small = np.abs(xa) < _SERIES_CUT
    if np.any(small):
        out[small] = np.polynomial.polynomial.polyval(xa[small], _G_COEFFS)
    if np.any(~small):
        xb = xa[~small]
        out[~small] = np.exp(-xb) * (1.0 + 3.0 / xb + 3.0 / (xb * xb)) - 3.0 / (xb * xb) + 0.5
    return out


# ---------------------------------------------------------------------------
# the six analytic branches

def _u_inner(r, p: ModelParams):
    al = p.alpha
    c = p.A * mod_sph_bessel_i(0, al * p.b1) * mod_sph_bessel_k(0, al * p.b2)
    return c * np.sinh(al * np.asarray(r, dtype=float))


def _u_middle(r, p: ModelParams):
    al = p.alpha
    x = al * np.asarray(r, dtype=float)
    cosh_gap = 2.0 * math.sinh(0.5 * al * p.delta) ** 2  # cosh(alpha*delta) - 1
    es = math.exp(-al * p.range_sum)
    bracket = -np.expm1(-x) - cosh_gap * np.exp(-x) - es * np.sinh(x)
    return p.A / (2.0 * al * al * p.b1 * p.b2) * bracket


def _u_outer(r, p: ModelParams):
    al = p.alpha
    c = p.A * mod_sph_bessel_i(0, al * p.b1) * mod_sph_bessel_i(0, al * p.b2)
    return c * np.exp(-al * np.asarray(r, dtype=float))


def _w_inner(r, p: ModelParams):
    al = p.alpha
    # minus sign: fixed by continuity with the middle branch at r = b2-b1
    # and confirmed by the numerical transform of the momentum amplitude
    c = -p.B * mod_sph_bessel_i(1, al * p.b1) * mod_sph_bessel_k(1, al * p.b2)
    return c * _xi2(al * np.asarray(r, dtype=float))


def _w_middle(r, p: ModelParams):
    al = p.alpha
    x = al * np.asarray(r, dtype=float)
    b1b2 = p.b1 * p.b2
    y = al * p.delta
    ab_m1 = al * al * b1b2 - 1.0
    # r-independent coefficients, grouped so near-equal ranges do not
    # cancel: each piece is explicitly O(y^2) or better where it must be
    const = 2.0 * (al * p.delta) ** 2 - 8.0 * ab_m1 * math.sinh(0.5 * y) ** 2 - 4.0 * y * math.sinh(y)
    pole = 24.0 * y * _sinh_minus(y) + 48.0 * ab_m1 * _sinh_sq_minus(0.5 * y) - 3.0 * y**4
    growth = math.exp(-al * p.range_sum) * (al * al * b1b2 + al * p.range_sum + 1.0)
    bracket = const + x * x + 8.0 * (ab_m1 * math.cosh(y) + y * math.sinh(y)) * _g(x) - 8.0 * growth * _xi2(x)
    if pole != 0.0:
        bracket = bracket + pole / (x * x)
    return p.B / (16.0 * al**4 * b1b2 * b1b2) * bracket


def _w_outer(r, p: ModelParams):
    al = p.alpha
    c = p.B * mod_sph_bessel_i(1, al * p.b1) * mod_sph_bessel_i(1, al * p.b2)
    return c * _xk2(al * np.asarray(r, dtype=float))


_BRANCHES = {
    ("u", Region.INNER): _u_inner,
    ("u", Region.MIDDLE): _u_middle,
    ("u", Region.OUTER): _u_outer,
    ("w", Region.INNER): _w_inner,
    ("w", Region.MIDDLE): _w_middle,
    ("w", Region.OUTER): _w_outer,
}

# fault-injection hook for the validation suite: maps (channel, region)
# to a multiplicative factor applied to that branch only
_BRANCH_SCALE: dict = {}


@contextmanager
def branch_scaled(channel: str, region: Region, factor: float):
    """Temporarily scale one analytic branch (validation-suite test hook)."""
    key = (channel, region)
    previous = _BRANCH_SCALE.get(key)
    _BRANCH_SCALE[key] = factor
    try:
        yield
    finally:
        if previous is None:
            _BRANCH_SCALE.pop(key, None)
        else:
            _BRANCH_SCALE[key] = previous


def branch_value(channel: str, region: Region, r, params: ModelParams):
    """One region's formula evaluated at arbitrary r (analytic continuation).

    Needed wherever two adjacent branches must be compared at or near a
    boundary; ordinary evaluation should go through u_coordinate /
    w_coordinate, which dispatch by region.
    """
    try:
        f = _BRANCHES[(channel, region)]
    except KeyError:
        raise ValueError(f"no branch {channel!r} / {region!r}") from None
    scale = _BRANCH_SCALE.get((channel, region), 1.0)
    out = f(r, params)
    return scale * out if scale != 1.0 else out


def _piecewise(channel: str, r, params: ModelParams):
    ra = np.asarray(r, dtype=float)
    if not np.all(np.isfinite(ra)):
        raise ValueError("r must be finite")
    if np.any(ra < 0):
        raise ValueError("r must be >= 0")
    scalar = ra.ndim == 0
    ra = np.atleast_1d(ra)
    if params.equal_range:
        inner = np.zeros(ra.shape, dtype=bool)
        middle = ra <= params.range_sum
    else:
        inner = ra <= params.delta
        middle = (ra > params.delta) & (ra <= params.range_sum)
    outer = ~(inner | middle)
    out = np.empty_like(ra)
    for region, mask in ((Region.INNER, inner), (Region.MIDDLE, middle), (Region.OUTER, outer)):
        if np.any(mask):
            out[mask] = branch_value(channel, region, ra[mask], params)
    return float(out[0]) if scalar else out


def u_coordinate(r, params: ModelParams):
    """S-channel reduced radial wavefunction u(r), vectorized over r >= 0."""
    return _piecewise("u", r, params)


def w_coordinate(r, params: ModelParams):
    """D-channel reduced radial wavefunction w(r), vectorized over r >= 0."""
    return _piecewise("w", r, params)


def _derivative(channel: str, r: float, params: ModelParams, region):
    if not r > 0:
        raise ValueError(f"derivative needs r > 0, got {r!r}")
    if region is None:
        region = region_of(r, params)

    def f(rr):
        return float(branch_value(channel, region, rr, params))

    return differentiate(f, r, DERIVATIVE_STEP)


def du_dr(r: float, params: ModelParams, region: Region | None = None) -> float:
    """du/dr at r > 0, differentiating a single branch's continuation.

    `region` selects which branch; by default the one containing r.  The
    stencil never mixes branches, so one-sided derivatives at a boundary
    are obtained by passing the two adjacent regions explicitly.
    """
    return _derivative("u", r, params, region)


def dw_dr(r: float, params: ModelParams, region: Region | None = None) -> float:
    """dw/dr at r > 0; see du_dr."""
    return _derivative("w", r, params, region)


def radial_sample(r: float, params: ModelParams) -> RadialSample:
    """u, w and region bookkeeping at a single radius."""
    return RadialSample(
        r=float(r),
        u=u_coordinate(r, params),
        w=w_coordinate(r, params),
        region=region_of(r, params),
    )
