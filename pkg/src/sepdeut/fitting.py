"""Damped-Newton fit of (b, ratio) to a target (r_rms, Q) pair.

Equal ranges are assumed during fitting: the search space is the common
range b and the strength ratio (B/A)^2, with A and B re-solved from the
normalisation condition at every trial point, so the iteration is a pure
2x2 root find on the scaled residuals

    F = ( (r_rms(b, ratio) - r_rms*) / r_rms*,  (Q(b, ratio) - Q*) / s )

where s = Q* when Q* > 0 and 1 otherwise.  The Jacobian comes from
forward differences.  If the damped iteration stalls, a coarse grid scan
over b in [0.5, 3] and ratio in [0, 10] supplies a fresh start; failing
that too, the best point seen is returned with converged = False.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import ModelParams
from .observables import _q_core, _rms_core, solve_normalisation
from .quadrature import QuadratureError

_B_FLOOR = 0.05


@dataclass(frozen=True)
class FitTargets:
    """Target rms radius (fm) and quadrupole moment (fm^2)."""

    r_rms: float
    Q: float

    def __post_init__(self):
        problems = []
        if not (math.isfinite(self.r_rms) and self.r_rms > 0):
            problems.append(f"r_rms must be finite and > 0, got {self.r_rms!r}")
        if not (math.isfinite(self.Q) and self.Q >= 0):
            problems.append(f"Q must be finite and >= 0, got {self.Q!r}")
        if problems:
            raise ValueError("invalid targets: " + "; ".join(problems))
        object.__setattr__(self, "r_rms", float(self.r_rms))
        object.__setattr__(self, "Q", float(self.Q))


@dataclass(frozen=True)
class FitResult:
    b: float
    ratio: float
    A: float
    B: float
    residual_norm: float
    iterations: int
    converged: bool


def fit_parameters(
    targets: FitTargets,
    alpha: float,
    initial=(1.2, 2.0),
    *,
    max_iterations: int = 50,
    tolerance: float = 1e-6,
    jacobian_rel_step: float = 1e-4,
    max_backtracks: int = 8,
    panel_order: int = 40,
) -> FitResult:
    """Solve r_rms(b, ratio) = target, Q(b, ratio) = target.

    Returns a FitResult whose `converged` flag reflects whether the
    scaled residual norm reached `tolerance` within the iteration
    budget; on failure the best point visited is reported.
    """
    if not (math.isfinite(alpha) and alpha > 0):
        raise ValueError(f"alpha must be finite and > 0, got {alpha!r}")
    q_scale = targets.Q if targets.Q > 0 else 1.0

    def residuals(b: float, ratio: float) -> np.ndarray:
        A, B = solve_normalisation(b, alpha, ratio, panel_order=panel_order)
        p = ModelParams(b1=b, b2=b, alpha=alpha, A=A, B=B)
        return np.array(
            [
                (_rms_core(p, panel_order) - targets.r_rms) / targets.r_rms,
                (_q_core(p, panel_order) - targets.Q) / q_scale,
            ]
        )

    evaluations = 0

    def newton(b: float, ratio: float, budget: int):
        nonlocal evaluations
        F = residuals(b, ratio)
        norm = float(np.linalg.norm(F))
        for _ in range(budget):
            if norm <= tolerance:
                break
            evaluations += 1
            hb = jacobian_rel_step * b
            hr = jacobian_rel_step * max(ratio, 1.0)
            J = np.empty((2, 2))
            J[:, 0] = (residuals(b + hb, ratio) - F) / hb
            J[:, 1] = (residuals(b, ratio + hr) - F) / hr
            try:
                step = np.linalg.solve(J, -F)
            except np.linalg.LinAlgError:
                break
            improved = False
            damping = 1.0
            for _ in range(max_backtracks + 1):
                b_try = max(b + damping * step[0], _B_FLOOR)
                ratio_try = max(ratio + damping * step[1], 0.0)
                try:
                    F_try = residuals(b_try, ratio_try)
                except (ValueError, QuadratureError):
                    damping *= 0.5
                    continue
                norm_try = float(np.linalg.norm(F_try))
                if norm_try < norm:
                    b, ratio, F, norm = b_try, ratio_try, F_try, norm_try
                    improved = True
                    break
                damping *= 0.5
            if not improved:
                break
        return b, ratio, norm

    b0 = max(float(initial[0]), _B_FLOOR)
    r0 = max(float(initial[1]), 0.0)
    b, ratio, norm = newton(b0, r0, max_iterations)

    if norm > tolerance:
        # coarse scan for a better basin, then one more Newton run
        best = (norm, b, ratio)
        for b_g in np.linspace(0.5, 3.0, 13):
            for r_g in np.linspace(0.0, 10.0, 11):
                try:
                    n_g = float(np.linalg.norm(residuals(b_g, r_g)))
                except (ValueError, QuadratureError):
                    continue
                if n_g < best[0]:
                    best = (n_g, float(b_g), float(r_g))
        b2, ratio2, norm2 = newton(best[1], best[2], max_iterations)
        if norm2 < norm:
            b, ratio, norm = b2, ratio2, norm2

    A, B = solve_normalisation(b, alpha, ratio, panel_order=panel_order)
    return FitResult(
        b=b,
        ratio=ratio,
        A=A,
        B=B,
        residual_norm=norm,
        iterations=evaluations,
        converged=norm <= tolerance,
    )
