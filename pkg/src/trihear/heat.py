"""Heat-trace synthesis, small-time coefficient fitting, and hearing.

The trace sum e^(-lam_1 t) + e^(-lam_2 t) + ... over a finite spectrum is
fitted against the basis {1/t, 1/sqrt(t), 1}; the coefficients hand back
area, perimeter, and the reciprocal-angle sum, which the reconstruction
solver turns into a triangle. Truncation of the spectrum is the dominant
error source, so every sample carries a two-term Weyl estimate of its
missing tail and the fit window is gated on it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    IllConditionedWindow,
    InfeasibleTarget,
    NonPhysical,
    TailTooLarge,
)
from .geometry import (
    MIN_HALF_COT_SUM,
    MIN_RECIP_SUM,
    HeatCoefficients,
    InvariantTriple,
    invariants_from_heat,
)
from .reconstruct import ReconstructionResult, reconstruct_triangle
from .spectrum import Spectrum, weyl_tail

#: A sample enters a fit only if its estimated tail is below this times h.
TAIL_GATE = 1e-8
#: Fit windows must span at least this factor in t.
MIN_SPAN = 10.0
#: Condition-number cap on the 3x3 normal system of the fit.
COND_CAP = 1e12
#: Relative allowance when projecting heard invariants onto the feasible set.
HEARD_SLACK = 0.05

_WINDOW_POINTS = 16


@dataclass(frozen=True)
class HeatSample:
    """Heat-trace partial sum at one time, with its truncation estimate."""

    t: float
    h: float
    tail_bound: float

    def __post_init__(self) -> None:
        if self.t <= 0 or self.h <= 0 or self.tail_bound < 0:
            raise ValueError("need t > 0, h > 0, tail_bound >= 0")


@dataclass(frozen=True)
class HeatFit:
    """Fitted expansion coefficients over a time window."""

    coefficients: HeatCoefficients
    t_min: float
    t_max: float
    max_residual: float  # largest relative misfit over the window


@dataclass(frozen=True)
class HearingReport:
    """All intermediate stages of the hearing pipeline."""

    samples: tuple[HeatSample, ...]
    fit: HeatFit
    invariants: InvariantTriple
    result: ReconstructionResult


def synthesize(spec: Spectrum, t: float) -> HeatSample:
    """Partial heat-trace sum at time t over the available eigenvalues.

    The tail estimate integrates the two-term Weyl density beyond the last
    eigenvalue; it is zero when the spectrum carries no domain metadata to
    estimate from.
    """
    if t <= 0:
        raise ValueError("t must be positive")
    h = float(np.sum(np.exp(-spec.eigenvalues * t)))
    if spec.area is not None and spec.perimeter is not None:
        tail = weyl_tail(spec.area, spec.perimeter, spec.lam_max, t)
    else:
        tail = 0.0
    return HeatSample(t=t, h=h, tail_bound=tail)


def synthesize_many(spec: Spectrum, ts: "Sequence[float] | np.ndarray") -> list[HeatSample]:
    return [synthesize(spec, float(t)) for t in ts]


def fit_expansion(samples: Sequence[HeatSample]) -> HeatFit:
    """Weighted least squares of h(t) against {1/t, 1/sqrt(t), 1}.

    Samples are weighted by 1/h^2, i.e. the fit minimizes relative misfit.
    Internally the equivalent system in h*t against {1, sqrt(t), t} is
    solved, which keeps the design matrix well scaled over wide windows.
    """
    if len(samples) < 8:
        raise IllConditionedWindow(f"need at least 8 samples, got {len(samples)}")
    ts = np.array([s.t for s in samples])
    hs = np.array([s.h for s in samples])
    tails = np.array([s.tail_bound for s in samples])
    t_min, t_max = float(ts.min()), float(ts.max())
    if t_max < MIN_SPAN * t_min * (1.0 - 1e-12):
        raise IllConditionedWindow(
            f"window [{t_min}, {t_max}] spans less than a factor {MIN_SPAN}"
        )
    over = tails > TAIL_GATE * hs
    if np.any(over):
        i = int(np.argmax(over))
        raise TailTooLarge(
            f"sample at t={ts[i]} has tail {tails[i]:.3e} > {TAIL_GATE} * h"
        )

    scale = hs * ts
    design = np.stack([np.ones_like(ts), np.sqrt(ts), ts], axis=1) / scale[:, None]
    normal = design.T @ design
    if np.linalg.cond(normal) > COND_CAP:
        raise IllConditionedWindow("normal system condition number exceeds 1e12")
    coef, *_ = np.linalg.lstsq(design, np.ones_like(ts), rcond=None)
    a0, a_half, a1 = (float(v) for v in coef)
    model = a0 / ts + a_half / np.sqrt(ts) + a1
    max_residual = float(np.max(np.abs(model - hs) / hs))
    return HeatFit(
        coefficients=HeatCoefficients(a0=a0, a_half=a_half, a1=a1),
        t_min=t_min,
        t_max=t_max,
        max_residual=max_residual,
    )


def hear_invariants(fit: HeatFit) -> InvariantTriple:
    """Invert fitted coefficients to (A, P, R); reject impossible geometry."""
    c = fit.coefficients
    area = 4.0 * math.pi * c.a0
    perimeter = -8.0 * math.sqrt(math.pi) * c.a_half
    recip = (24.0 * c.a1 + 1.0) / math.pi
    if area <= 0 or perimeter <= 0 or recip < MIN_RECIP_SUM - 0.05:
        raise NonPhysical(
            f"fitted coefficients give A={area}, P={perimeter}, R={recip}"
        )
    return invariants_from_heat(c)


def choose_window(spec: Spectrum, points: int = _WINDOW_POINTS) -> np.ndarray:
    """Log-spaced sample times for a trustworthy fit of this spectrum.

    The lower end is the first time at which the estimated tail drops below
    the fit gate; the upper end extends past a decade until the constant
    coefficient contributes at least 1% of the trace (estimated from a
    provisional fit), so the constant is identifiable.
    """
    if spec.area is None or spec.perimeter is None:
        raise TailTooLarge("spectrum lacks area/perimeter metadata for tail control")
    lam1, lam_top = float(spec.eigenvalues[0]), spec.lam_max
    grid = np.geomspace(0.1 / lam_top, 100.0 / lam1, 600)
    ok = np.array(
        [synthesize(spec, t).tail_bound <= TAIL_GATE * synthesize(spec, t).h for t in grid]
    )
    if not np.any(ok):
        raise TailTooLarge("no sample time passes the tail gate; spectrum too short")
    t_min = float(grid[np.argmax(ok)])
    t_max = MIN_SPAN * t_min

    provisional = fit_expansion(
        synthesize_many(spec, np.geomspace(t_min, t_max, points))
    )
    c = provisional.coefficients
    if c.a1 > 0.0:
        # Smallest time at which the constant term reaches 1% of the model.
        tt = np.geomspace(t_min, 1000.0 / lam1, 400)
        share = c.a1 / np.abs(c.a0 / tt + c.a_half / np.sqrt(tt) + c.a1)
        hit = share >= 0.01
        if np.any(hit):
            t_max = max(t_max, float(tt[np.argmax(hit)]))
    return np.geomspace(t_min, t_max, points)


def hear_pipeline(spec: Spectrum) -> HearingReport:
    """Full chain: samples -> fit -> invariants -> triangle.

    Heard invariants carry fit noise, so before reconstruction they are
    projected onto the feasible set when they fall within ``HEARD_SLACK``
    (relative) of it; genuinely infeasible values still raise.
    """
    samples = synthesize_many(spec, choose_window(spec))
    fit = fit_expansion(samples)
    inv = hear_invariants(fit)
    result = reconstruct_triangle(inv, snap_rel=HEARD_SLACK)
    return HearingReport(
        samples=tuple(samples), fit=fit, invariants=inv, result=result
    )


def hear_triangle(spec: Spectrum) -> ReconstructionResult:
    """Recover the triangle a spectrum belongs to."""
    return hear_pipeline(spec).result
