"""Gauss-Legendre panel integration, semi-infinite integrals, differentiation.

The integrands in this package are piecewise-analytic products of
exponentials, low-degree polynomials and slow oscillations, so fixed-order
Gauss-Legendre panels between known breakpoints beat any adaptive scheme;
the only care needed is placing breakpoints at the region boundaries and
at the zeros of the oscillatory factors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .model import EPS_REGION, ModelParams


class QuadratureError(RuntimeError):
    """An integrand returned a non-finite value, or a rule misbehaved."""


@dataclass(frozen=True)
class TruncateTail:
    """Ignore the integral beyond the last breakpoint.

    `bound` documents the analytic estimate of what is being dropped.
    """

    limit: float
    bound: float = 1e-12


@dataclass(frozen=True)
class MapRationalTail:
    """Integrate the tail exactly via x = last + scale*t/(1-t), t in [0,1)."""

    scale: float = 1.0


@dataclass(frozen=True)
class QuadratureScheme:
    panel_order: int
    breakpoints: tuple
    tail: object = None

    def __post_init__(self):
        n = int(self.panel_order)
        if n < 2:
            raise ValueError(f"panel_order must be >= 2, got {n}")
        pts = tuple(float(b) for b in self.breakpoints)
        if len(pts) < 2:
            raise ValueError("need at least two breakpoints")
        if any(b2 <= b1 for b1, b2 in zip(pts, pts[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        object.__setattr__(self, "panel_order", n)
        object.__setattr__(self, "breakpoints", pts)


@lru_cache(maxsize=32)
def gauss_legendre_rule(n: int):
    """Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].

    Returns cached arrays; treat them as read-only.
    """
    if not 2 <= n <= 128:
        raise ValueError(f"rule order must be in [2, 128], got {n}")
    nodes, weights = np.polynomial.legendre.leggauss(n)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def _panel_sum(f, a: float, b: float, nodes, weights) -> float:
    half = 0.5 * (b - a)
    x = a + half * (nodes + 1.0)
    vals = np.asarray(f(x), dtype=float)
    if vals.shape != x.shape:
        vals = np.broadcast_to(vals, x.shape)
    if not np.all(np.isfinite(vals)):
        bad = x[~np.isfinite(vals)][0]
        raise QuadratureError(f"integrand is non-finite at x = {bad!r}")
    return half * float(weights @ vals)


def integrate_panels(f, scheme: QuadratureScheme) -> float:
    """Sum Gauss-Legendre panel integrals over consecutive breakpoints.

    `f` must accept a numpy array of abscissae and return matching values.
    A MapRationalTail appends the integral over (last breakpoint, inf).
    """
    nodes, weights = gauss_legendre_rule(scheme.panel_order)
    pieces = [
        _panel_sum(f, a, b, nodes, weights)
        for a, b in zip(scheme.breakpoints, scheme.breakpoints[1:])
    ]
    if isinstance(scheme.tail, MapRationalTail):
        last = scheme.breakpoints[-1]
        s = scheme.tail.scale

        def mapped(t):
            return f(last + s * t / (1.0 - t)) * s / (1.0 - t) ** 2

        pieces.append(_panel_sum(mapped, 0.0, 1.0, nodes, weights))
    return math.fsum(pieces)


def integrate_semi_infinite(f, start: float, decay_alpha: float, *, panel_order: int = 40) -> float:
    """Integrate f over [start, inf) for integrands decaying like exp(-decay_alpha*r).

    Truncates at start + 40/decay_alpha with panels one decay length wide;
    for |f| <= C*exp(-decay_alpha*r)*poly(r) the dropped tail is below
    1e-12 relative to the total.
    """
    if not decay_alpha > 0:
        raise ValueError(f"decay_alpha must be > 0, got {decay_alpha!r}")
    width = 1.0 / decay_alpha
    breakpoints = tuple(start + i * width for i in range(41))
    scheme = QuadratureScheme(
        panel_order=panel_order,
        breakpoints=breakpoints,
        tail=TruncateTail(limit=breakpoints[-1]),
    )
    return integrate_panels(f, scheme)


def differentiate(f, x: float, h0: float = 1e-3) -> float:
    """Richardson-extrapolated central difference, two levels, error O(h0^6).

    The caller must ensure f is smooth on [x - h0, x + h0]; in particular
    no piecewise-formula boundary may sit inside the stencil.
    """

    def central(h):
        return (f(x + h) - f(x - h)) / (2.0 * h)

    d1, d2, d3 = central(h0), central(h0 / 2.0), central(h0 / 4.0)
    r1 = (4.0 * d2 - d1) / 3.0
    r2 = (4.0 * d3 - d2) / 3.0
    return (16.0 * r2 - r1) / 15.0


def radial_scheme(params: ModelParams, *, panel_order: int = 40) -> QuadratureScheme:
    """Panels for semi-infinite r-space observable integrals.

    Breakpoints at the region boundaries (piecewise-analytic integrands),
    then one decay length 1/alpha per panel out to 40 decay lengths past
    the outer boundary, where the exp(-2*alpha*r) envelope puts the
    dropped tail far below every tolerance used here.
    """
    pts = [0.0]
    if not params.equal_range:
        pts.append(params.delta)
    pts.append(params.range_sum)
    width = 1.0 / params.alpha
    pts.extend(params.range_sum + i * width for i in range(1, 41))
    return QuadratureScheme(
        panel_order=panel_order,
        breakpoints=tuple(pts),
        tail=TruncateTail(limit=pts[-1]),
    )


def momentum_scheme(params: ModelParams, *, k_max: float = 80.0, panel_order: int = 40) -> QuadratureScheme:
    """Panels for k-space probability integrals.

    Breakpoints at the form-factor zeros k = n*pi/max(b1, b2), with two
    extra panels [0, alpha, 3*alpha] resolving the 1/(k^2+alpha^2)^2 peak.
    The integrands decay like k^-6, so truncation at k_max = 80 leaves a
    tail near 1e-11 of the total.
    """
    spacing = math.pi / max(params.b1, params.b2)
    pts = [0.0]
    for p in (params.alpha, 3.0 * params.alpha):
        if p < k_max and p > pts[-1] + EPS_REGION:
            pts.append(p)
    n = 1
    while n * spacing < k_max:
        if n * spacing > pts[-1] + EPS_REGION:
            pts.append(n * spacing)
        n += 1
    pts.append(k_max)
    return QuadratureScheme(panel_order=panel_order, breakpoints=tuple(pts))
