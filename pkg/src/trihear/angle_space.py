"""Analysis on the simplex of triangle angle triples.

Points (alpha, beta, gamma) with positive entries summing to pi form an open
triangle D; the three lines where two angles coincide cut it into six
chambers, one per angle ordering. Two symmetric functions drive everything:

* ``half_cot_sum``  -- cot(alpha/2) + cot(beta/2) + cot(gamma/2)
* ``recip_sum``     -- 1/alpha + 1/beta + 1/gamma

``recip_sum`` is strictly convex, so its level sets in D are convex closed
curves around the equilateral center, and ``half_cot_sum`` is strictly
monotone along the part of any such curve inside one chamber. The functions
here expose the closed-form derivatives, the gradient-independence
determinant, the scalar gap function 1/sin^2(x) - 1/x^2 whose monotone
convexity underlies all of it, and a parametrization of the level-curve arcs
used by the reconstruction solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError
from .geometry import AnglePoint, MIN_HALF_COT_SUM, MIN_RECIP_SUM

#: Equilateral center of the angle simplex.
CENTER = AnglePoint(math.pi / 3.0, math.pi / 3.0, math.pi - 2.0 * (math.pi / 3.0))

#: Pairwise angle differences below this count as isosceles when labelling.
ISOSCELES_TOL = 1e-9


def _angles(p: "AnglePoint | Sequence[float]") -> np.ndarray:
    if isinstance(p, AnglePoint):
        return np.array(p.angles, dtype=float)
    arr = np.asarray(p, dtype=float)
    if arr.shape != (3,):
        raise ValueError(f"expected an angle triple, got shape {arr.shape}")
    return arr


def is_isosceles(p: "AnglePoint | Sequence[float]", tol: float = ISOSCELES_TOL) -> bool:
    """True when some pair of angles agrees within ``tol``."""
    a, b, g = _angles(p)
    return min(abs(a - b), abs(b - g), abs(a - g)) <= tol


def half_cot_sum(p: "AnglePoint | Sequence[float]") -> float:
    """Sum of half-angle cotangents; equals P^2/(4A) for the triangle."""
    th = _angles(p)
    return float(np.sum(1.0 / np.tan(th / 2.0)))


def recip_sum(p: "AnglePoint | Sequence[float]") -> float:
    """Sum of angle reciprocals."""
    th = _angles(p)
    return float(np.sum(1.0 / th))


def grad_half_cot_sum(p: "AnglePoint | Sequence[float]") -> np.ndarray:
    th = _angles(p)
    return -0.5 / np.sin(th / 2.0) ** 2


def grad_recip_sum(p: "AnglePoint | Sequence[float]") -> np.ndarray:
    th = _angles(p)
    return -1.0 / th**2


def hessian_recip_sum(p: "AnglePoint | Sequence[float]") -> np.ndarray:
    """Hessian of ``recip_sum``: diag(2/theta^3), positive definite on the
    positive octant, which is what makes the level curves convex."""
    th = _angles(p)
    return np.diag(2.0 / th**3)


def independence_det(p: "AnglePoint | Sequence[float]", normalized: bool = False) -> float:
    """Determinant of the gradients of both invariant functions plus the
    angle-sum constraint.

    Rows are grad(half_cot_sum), grad(recip_sum), (1, 1, 1). The determinant
    vanishes exactly when two angles coincide; with ``normalized`` each row is
    scaled to unit length first, giving a scale-free independence measure.
    """
    gf = grad_half_cot_sum(p)
    gg = grad_recip_sum(p)
    gh = np.ones(3)
    if normalized:
        gf = gf / np.linalg.norm(gf)
        gg = gg / np.linalg.norm(gg)
        gh = gh / math.sqrt(3.0)
    m = np.array([gf, gg, gh])
    return float(
        m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
        - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
        + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0])
    )


# ---------------------------------------------------------------------------
# The scalar gap function 1/sin^2(x) - 1/x^2 on (0, pi)
# ---------------------------------------------------------------------------

#: Distance from an endpoint of (0, pi) below which series evaluation is used.
_ENDPOINT_GUARD = 1e-3

# 1/sin^2(x) = 1/x^2 + 1/3 + x^2/15 + 2x^4/189 + x^6/675 + O(x^8)
_CSC2_TAIL = (1.0 / 3.0, 1.0 / 15.0, 2.0 / 189.0, 1.0 / 675.0)


def _csc2_gap_series_small(x: np.ndarray) -> np.ndarray:
    x2 = x * x
    c0, c1, c2, c3 = _CSC2_TAIL
    return c0 + x2 * (c1 + x2 * (c2 + x2 * c3))


def _csc2_gap_array(x: np.ndarray) -> np.ndarray:
    """Vectorized gap evaluation with stable branches near 0 and pi."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    near0 = x < _ENDPOINT_GUARD
    near_pi = x > math.pi - _ENDPOINT_GUARD
    mid = ~(near0 | near_pi)
    # Direct difference is fine away from 0; near 0 it cancels catastrophically.
    xm = x[mid]
    out[mid] = 1.0 / np.sin(xm) ** 2 - 1.0 / xm**2
    x0 = x[near0]
    out[near0] = _csc2_gap_series_small(x0)
    # Near pi reflect: 1/sin^2(x) = 1/sin^2(pi - x), expanded at 0.
    w = math.pi - x[near_pi]
    out[near_pi] = 1.0 / w**2 + _csc2_gap_series_small(w) - 1.0 / x[near_pi] ** 2
    return out


def csc2_gap(x: float) -> float:
    """The gap 1/sin^2(x) - 1/x^2 for x in (0, pi).

    Strictly increasing and strictly convex on the interval, with limit 1/3
    at 0. Evaluation switches to series forms within 1e-3 of the endpoints
    where the direct difference loses precision.
    """
    x = float(x)
    if not (0.0 < x < math.pi):
        raise DomainError(f"gap function defined on (0, pi), got {x}")
    return float(_csc2_gap_array(np.array([x]))[0])


def csc2_gap_series(x: float, terms: int) -> float:
    """Partial-fraction approximation sum_{1<=|k|<=terms} 1/(x - k*pi)^2.

    Truncation error is below 2/(pi^2 * terms) on all of (0, pi).
    """
    x = float(x)
    if not (0.0 < x < math.pi):
        raise DomainError(f"gap series defined on (0, pi), got {x}")
    if terms < 1:
        raise ValueError(f"need at least one term, got {terms}")
    k = np.arange(1, terms + 1, dtype=float) * math.pi
    return float(np.sum(1.0 / (x - k) ** 2) + np.sum(1.0 / (x + k) ** 2))


def quartic_sine_margin(x: "float | np.ndarray") -> "float | np.ndarray":
    """Margin 3x^4 - 3sin^4(x) - 2x^4 sin^2(x); positive on (0, 4).

    Positivity of this expression is equivalent to convexity of the gap
    function. The margin shrinks like x^8/15 near zero, far below what the
    assembled floating-point expression resolves, so small arguments are
    evaluated by the series x^8/15 + 2x^10/105 - 32x^12/4725.
    """
    x = np.asarray(x, dtype=float)
    small = x < 0.1
    s = np.sin(x)
    direct = 3.0 * x**4 - 3.0 * s**4 - 2.0 * x**4 * s**2
    xs = np.where(small, x, 0.0)
    x2 = xs * xs
    series = xs**8 * (1.0 / 15.0 + x2 * (2.0 / 105.0 - x2 * (32.0 / 4725.0)))
    out = np.where(small, series, direct)
    return out if out.ndim else float(out)


def sine_taylor_margin(x: "float | np.ndarray") -> "float | np.ndarray":
    """Margin (x - x^3/6 + x^5/120) - sin(x); positive for x > 0.

    Near zero the margin is x^7/5040 while the terms are O(x), so small
    arguments use the alternating tail of the sine series directly.
    """
    x = np.asarray(x, dtype=float)
    small = x < 0.5
    direct = x - x**3 / 6.0 + x**5 / 120.0 - np.sin(x)
    xs = np.where(small, x, 0.0)
    x2 = xs * xs
    series = xs**7 / 5040.0 * (1.0 - x2 / 72.0 * (1.0 - x2 / 110.0 * (1.0 - x2 / 156.0)))
    out = np.where(small, series, direct)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class GapGridReport:
    """Minimum margins of the gap-function checks over a uniform grid."""

    grid_n: int
    min_forward_difference: float
    min_second_difference: float
    min_quartic_margin: float
    min_sine_margin: float

    @property
    def all_positive(self) -> bool:
        return min(
            self.min_forward_difference,
            self.min_second_difference,
            self.min_quartic_margin,
            self.min_sine_margin,
        ) > 0.0


def gap_grid_report(grid_n: int) -> GapGridReport:
    """Scan a uniform grid of (0, pi) for the gap-function properties.

    Checks, via finite differences, that the gap is strictly increasing and
    strictly convex, and that the two closed-form inequalities backing those
    facts hold strictly. Returns the minimum margins; callers assert
    positivity.
    """
    if grid_n < 100:
        raise ValueError(f"grid_n must be at least 100, got {grid_n}")
    x = math.pi * np.arange(1, grid_n + 1) / (grid_n + 1)
    g = _csc2_gap_array(x)
    d1 = np.diff(g)
    d2 = np.diff(g, 2)
    return GapGridReport(
        grid_n=grid_n,
        min_forward_difference=float(d1.min()),
        min_second_difference=float(d2.min()),
        min_quartic_margin=float(np.min(quartic_sine_margin(x))),
        min_sine_margin=float(np.min(sine_taylor_margin(x))),
    )


# ---------------------------------------------------------------------------
# Chambers and level-curve arcs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ChamberLabel:
    """Permutation placing an angle triple into descending order.

    ``order[i]`` is the index of the i-th largest angle in the original
    triple; ties keep the original relative order, so the equilateral point
    gets the identity label.
    """

    order: tuple[int, int, int]

    def __post_init__(self) -> None:
        if sorted(self.order) != [0, 1, 2]:
            raise ValueError(f"not a permutation of (0, 1, 2): {self.order}")


def canonicalize(p: "AnglePoint | Sequence[float]") -> tuple[AnglePoint, ChamberLabel]:
    """Sort an angle triple descending and record which chamber it came from."""
    th = _angles(p)
    order = tuple(int(i) for i in np.argsort(-th, kind="stable"))
    srt = th[list(order)]
    # Re-close the angle sum exactly after permuting.
    point = AnglePoint(float(srt[0]), float(srt[1]),
                       math.pi - float(srt[0]) - float(srt[1]))
    return point, ChamberLabel(order)


@dataclass(frozen=True)
class LevelCurvePoint:
    """Point of a level curve of ``recip_sum`` inside the canonical chamber."""

    point: AnglePoint
    level: float
    u: float  # arc parameter in [0, 1] between the two isosceles endpoints


def level_curve_endpoints(level: float) -> tuple[AnglePoint, AnglePoint]:
    """Isosceles endpoints of the canonical-chamber arc of a level curve.

    On either isosceles ray the level equation 2/x + 1/(pi - 2x) = s reduces
    to the quadratic 2 s x^2 - (s pi + 3) x + 2 pi = 0, whose larger root
    gives the endpoint with the two larger angles equal and whose smaller
    root gives the one with the two smaller angles equal.
    """
    s = float(level)
    if s < MIN_RECIP_SUM - 1e-12:
        raise DomainError(f"level {s} below the equilateral minimum {MIN_RECIP_SUM}")
    q = s * math.pi
    disc = max((q - 1.0) * (q - 9.0), 0.0)
    root = math.sqrt(disc)
    x_hi = ((q + 3.0) + root) / (4.0 * s)
    x_lo = math.pi / (s * x_hi)  # via the product of the roots, cancellation-free
    left = AnglePoint(x_hi, x_hi, math.pi - 2.0 * x_hi)
    right = AnglePoint(math.pi - 2.0 * x_lo, x_lo, x_lo)
    return left, right


def _project_to_level(level: np.ndarray, chord: np.ndarray) -> np.ndarray:
    """Push chord points outward from the center onto the level curve.

    ``chord`` rows lie inside the convex sublevel set, so along the ray from
    the equilateral center through each row the level value is increasing and
    crosses ``level`` exactly once; Newton from the chord point converges
    monotonically because the restriction is convex.
    """
    e = math.pi / 3.0
    d = chord - e
    # Rays that would leave the positive octant are capped just inside it.
    with np.errstate(divide="ignore"):
        caps = np.where(d < 0, -e / d, np.inf)
    t_max = caps.min(axis=1) * (1.0 - 1e-14)
    t = np.ones(len(chord))
    degenerate = np.max(np.abs(d), axis=1) < 1e-15
    t_max = np.where(degenerate, 1.0, t_max)
    for _ in range(80):
        pts = e + t[:, None] * d
        val = np.sum(1.0 / pts, axis=1) - level
        if np.all(np.abs(val) <= 1e-13 * level):
            break
        dval = np.sum(-d / pts**2, axis=1)
        step = np.where(degenerate, 0.0, -val / np.where(dval == 0.0, 1.0, dval))
        t = np.clip(t + step, 1.0, t_max)
    return e + t[:, None] * d


def level_curve_arc(level: float, u: "Sequence[float] | np.ndarray") -> np.ndarray:
    """Sample the canonical-chamber arc of a level curve at parameters u.

    The arc is the chord between the two isosceles endpoints re-projected
    onto the curve along rays from the equilateral center; u=0 is the
    endpoint with the two larger angles equal.
    """
    left, right = level_curve_endpoints(level)
    uu = np.asarray(u, dtype=float)
    if np.any((uu < 0.0) | (uu > 1.0)):
        raise ValueError("arc parameters must lie in [0, 1]")
    pl = np.array(left.angles)
    pr = np.array(right.angles)
    chord = (1.0 - uu)[:, None] * pl + uu[:, None] * pr
    lv = np.full(len(chord), float(level))
    return _project_to_level(lv, chord)


def level_curve_point(level: float, u: float) -> LevelCurvePoint:
    """Single point of the canonical-chamber arc at parameter u."""
    row = level_curve_arc(level, [float(u)])[0]
    point = AnglePoint(float(row[0]), float(row[1]),
                       math.pi - float(row[0]) - float(row[1]))
    return LevelCurvePoint(point=point, level=float(level), u=float(u))
