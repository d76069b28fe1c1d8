"""Recover the unique triangle with prescribed area, perimeter, and
reciprocal-angle sum.

The solver follows the structure that makes uniqueness true instead of
throwing a generic root finder at the problem. Writing f for the half-angle
cotangent sum (which equals P^2/4A) and g for the reciprocal-angle sum:

1. the two isosceles endpoints of the arc {g = g*} in the canonical chamber
   come from a quadratic (g restricted to an isosceles ray is a rational
   function of one variable);
2. f is strictly monotone along the arc, so bisection in the arc parameter
   brackets the unique solution;
3. a few guarded Newton steps on (beta, gamma) polish to full precision.

Convexity of the sublevel sets of g keeps every iterate inside the simplex,
so convergence is structural, not luck.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import angle_space
from .errors import InconsistentInvariants, InfeasibleTarget, NoConvergence
from .geometry import (
    MIN_HALF_COT_SUM,
    MIN_RECIP_SUM,
    AnglePoint,
    InvariantTriple,
    Triangle,
    invariants_of,
    triangle_from_sides,
)

#: Targets this far (relative) outside the feasible set are snapped onto it;
#: absorbs rounding of externally supplied invariants.
SNAP_REL = 1e-7
#: Solver success requires both residuals below this, relative to the targets.
RESIDUAL_REL = 1e-10

_BISECTION_STEPS = 30
_NEWTON_STEPS = 5
ITERATION_CAP = 200


@dataclass(frozen=True)
class ReconstructionResult:
    """Solved triangle with the angle point and solver diagnostics."""

    triangle: Triangle
    angles: AnglePoint
    iterations: int
    residual_f: float
    residual_g: float


@dataclass(frozen=True)
class InjectivityReport:
    """Outcome of a brute-force collision scan over one chamber."""

    grid_n: int
    points: int
    collisions: int
    min_margin: float  # smallest max(rel df, rel dg) over separated pairs


def _f_vec(points: np.ndarray) -> np.ndarray:
    return np.sum(1.0 / np.tan(points / 2.0), axis=1)


def _g_vec(points: np.ndarray) -> np.ndarray:
    return np.sum(1.0 / points, axis=1)


def _solve_angles_batch(
    f_targets: np.ndarray,
    g_targets: np.ndarray,
    snap_rel: float = SNAP_REL,
    width_trace: "list[float] | None" = None,
) -> tuple[np.ndarray, int]:
    """Vectorized three-phase solve; returns angle rows and iterations used."""
    fs = np.asarray(f_targets, dtype=float)
    gs = np.asarray(g_targets, dtype=float)
    if fs.shape != gs.shape or fs.ndim != 1:
        raise ValueError("targets must be equal-length 1-D arrays")
    if np.any(~np.isfinite(fs)) or np.any(~np.isfinite(gs)):
        raise InfeasibleTarget("targets must be finite")

    g_allow = max(1e-12, snap_rel * MIN_RECIP_SUM)
    bad_g = gs < MIN_RECIP_SUM - g_allow
    if np.any(bad_g):
        i = int(np.argmax(bad_g))
        raise InfeasibleTarget(
            f"reciprocal-angle sum {gs[i]} below the equilateral minimum {MIN_RECIP_SUM}"
        )
    bad_f = fs < MIN_HALF_COT_SUM * (1.0 - snap_rel)
    if np.any(bad_f):
        i = int(np.argmax(bad_f))
        raise InfeasibleTarget(
            f"cotangent sum {fs[i]} below the equilateral minimum {MIN_HALF_COT_SUM}"
            " (perimeter too small for the area)"
        )
    gs = np.maximum(gs, MIN_RECIP_SUM)

    # Phase 1: isosceles endpoints of the arc, from the quadratic
    # 2 s x^2 - (s pi + 3) x + 2 pi = 0 with s = g target.
    q = gs * math.pi
    disc = np.maximum((q - 1.0) * (q - 9.0), 0.0)
    x_hi = ((q + 3.0) + np.sqrt(disc)) / (4.0 * gs)
    x_lo = math.pi / (gs * x_hi)
    p_left = np.stack([x_hi, x_hi, math.pi - 2.0 * x_hi], axis=1)
    p_right = np.stack([math.pi - 2.0 * x_lo, x_lo, x_lo], axis=1)
    f_left = _f_vec(p_left)
    f_right = _f_vec(p_right)

    f_min = np.minimum(f_left, f_right)
    f_max = np.maximum(f_left, f_right)
    outside = (fs < f_min - snap_rel * fs) | (fs > f_max + snap_rel * fs)
    if np.any(outside):
        i = int(np.argmax(outside))
        raise InfeasibleTarget(
            f"cotangent sum {fs[i]} outside the attainable range "
            f"[{f_min[i]}, {f_max[i]}] at reciprocal-angle sum {gs[i]}"
        )
    fs = np.clip(fs, f_min, f_max)

    # Bracket validity is structural: f at the endpoints straddles the target.
    assert np.all((f_min <= fs) & (fs <= f_max))

    # Targets at an endpoint value short-circuit to the isosceles point.
    at_left = np.abs(fs - f_left) <= 1e-12 * fs
    at_right = np.abs(fs - f_right) <= 1e-12 * fs

    # Phase 2: bisection in the arc parameter; f is strictly monotone there.
    sign = np.where(f_right >= f_left, 1.0, -1.0)
    lo = np.zeros_like(fs)
    hi = np.ones_like(fs)
    iterations = 0
    for _ in range(_BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        chord = (1.0 - mid)[:, None] * p_left + mid[:, None] * p_right
        pts = angle_space._project_to_level(gs, chord)
        below = (_f_vec(pts) - fs) * sign < 0.0
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
        iterations += 1
        if width_trace is not None:
            width_trace.append(float(np.max(hi - lo)))
    u = 0.5 * (lo + hi)
    chord = (1.0 - u)[:, None] * p_left + u[:, None] * p_right
    pts = angle_space._project_to_level(gs, chord)

    # Phase 3: Newton on (beta, gamma) with alpha = pi - beta - gamma,
    # accepted per lane only while it improves the residual.
    def residual(points: np.ndarray) -> np.ndarray:
        return np.maximum(
            np.abs(_f_vec(points) - fs) / fs, np.abs(_g_vec(points) - gs) / gs
        )

    res = residual(pts)
    for _ in range(_NEWTON_STEPS):
        a, b, g = pts[:, 0], pts[:, 1], pts[:, 2]
        fa = -0.5 / np.sin(a / 2.0) ** 2
        fb = -0.5 / np.sin(b / 2.0) ** 2
        fg = -0.5 / np.sin(g / 2.0) ** 2
        ga = -1.0 / a**2
        gb = -1.0 / b**2
        gg = -1.0 / g**2
        j11 = fb - fa
        j12 = fg - fa
        j21 = gb - ga
        j22 = gg - ga
        det = j11 * j22 - j12 * j21
        det = np.where(det == 0.0, 1.0, det)
        rf = _f_vec(pts) - fs
        rg = _g_vec(pts) - gs
        db = -(rf * j22 - rg * j12) / det
        dg = -(j11 * rg - j21 * rf) / det
        nb = b + db
        ng = g + dg
        na = math.pi - nb - ng
        cand = np.stack([na, nb, ng], axis=1)
        valid = np.all(cand > 0.0, axis=1)
        cand_res = np.where(valid, residual(np.where(valid[:, None], cand, pts)), np.inf)
        take = cand_res < res
        pts = np.where(take[:, None], cand, pts)
        res = np.where(take, cand_res, res)
        iterations += 1

    pts = np.where(at_left[:, None], p_left, pts)
    pts = np.where(at_right[:, None], p_right, pts)
    res = residual(pts)

    if iterations > ITERATION_CAP or np.any(res > RESIDUAL_REL):
        i = int(np.argmax(res))
        raise NoConvergence(
            f"residual {res[i]:.3e} above {RESIDUAL_REL} after {iterations} iterations"
        )

    # Canonical ordering can be disturbed at isosceles ties by round-off.
    pts = -np.sort(-pts, axis=1)
    return pts, iterations


def reconstruct_angles(f_target: float, g_target: float) -> AnglePoint:
    """Unique canonical-chamber angle triple with the given values of the
    half-angle cotangent sum and the reciprocal-angle sum."""
    pts, _ = _solve_angles_batch(np.array([float(f_target)]), np.array([float(g_target)]))
    a, b, _ = pts[0]
    return AnglePoint(float(a), float(b), math.pi - float(a) - float(b))


def _sides_from_angles(points: np.ndarray, areas: np.ndarray) -> np.ndarray:
    """Scale the angle solution to the requested area via the sine rule."""
    sines = np.sin(points)
    circum = np.sqrt(areas / (2.0 * np.prod(sines, axis=1)))
    return 2.0 * circum[:, None] * sines


def reconstruct_triangles(
    invariants: Sequence[InvariantTriple], snap_rel: float = SNAP_REL
) -> list[ReconstructionResult]:
    """Batch reconstruction; one result per invariant triple."""
    areas = np.array([inv.area for inv in invariants])
    perims = np.array([inv.perimeter for inv in invariants])
    recips = np.array([inv.recip_angle_sum for inv in invariants])
    f_targets = perims**2 / (4.0 * areas)
    pts, iterations = _solve_angles_batch(f_targets, recips, snap_rel=snap_rel)
    sides = _sides_from_angles(pts, areas)
    res_f = np.abs(_f_vec(pts) - f_targets) / f_targets
    res_g = np.abs(_g_vec(pts) - recips) / recips

    out = []
    for i, inv in enumerate(invariants):
        tri = triangle_from_sides(*sides[i])
        point = AnglePoint(
            float(pts[i, 0]), float(pts[i, 1]),
            math.pi - float(pts[i, 0]) - float(pts[i, 1]),
        )
        check = invariants_of(tri)
        rel = max(
            abs(check.area - inv.area) / inv.area,
            abs(check.perimeter - inv.perimeter) / inv.perimeter,
            abs(check.recip_angle_sum - inv.recip_angle_sum) / inv.recip_angle_sum,
        )
        # The clip applied to out-of-range targets is bounded by snap_rel, so a
        # mismatch beyond both tolerances means the solve went wrong.
        if rel > max(1e-6, 2.0 * snap_rel):
            raise InconsistentInvariants(
                f"recovered triangle mismatches invariants by {rel:.3e} (relative)"
            )
        out.append(
            ReconstructionResult(
                triangle=tri,
                angles=point,
                iterations=iterations,
                residual_f=float(res_f[i]),
                residual_g=float(res_g[i]),
            )
        )
    return out


def reconstruct_triangle(inv: InvariantTriple, snap_rel: float = SNAP_REL) -> ReconstructionResult:
    """Recover the unique triangle with the given (A, P, R).

    ``snap_rel`` is the relative allowance for targets that fall just outside
    the feasible set (as happens when invariants were rounded for transport);
    anything further out raises InfeasibleTarget.
    """
    return reconstruct_triangles([inv], snap_rel=snap_rel)[0]


def injectivity_scan(grid_n: int) -> InjectivityReport:
    """Brute-force check that (f, g) separates points of one chamber.

    Samples grid_n^2 points of the open canonical chamber and reports the
    closest approach to a collision: pairs separated by more than 1e-3 in
    angle space must differ by at least 1e-6 (relative) in f or in g.
    """
    if grid_n < 50:
        raise ValueError(f"grid_n must be at least 50, got {grid_n}")
    idx = (np.arange(grid_n) + 0.5) / grid_n
    v, u = np.meshgrid(idx, idx, indexing="ij")
    gam = v.ravel() * (math.pi / 3.0)
    bet = gam + u.ravel() * (math.pi - 3.0 * gam) / 2.0
    alp = math.pi - bet - gam
    pts = np.stack([alp, bet, gam], axis=1)
    fv = _f_vec(pts)
    gv = _g_vec(pts)

    n = len(pts)
    collisions = 0
    min_margin = math.inf
    block = 256
    for start in range(0, n, block):
        stop = min(start + block, n)
        d2 = np.sum((pts[start:stop, None, :] - pts[None, :, :]) ** 2, axis=2)
        df = np.abs(fv[start:stop, None] - fv[None, :]) / np.minimum(
            fv[start:stop, None], fv[None, :]
        )
        dg = np.abs(gv[start:stop, None] - gv[None, :]) / np.minimum(
            gv[start:stop, None], gv[None, :]
        )
        margin = np.maximum(df, dg)
        separated = d2 > 1e-6  # angle distance > 1e-3
        if np.any(separated):
            min_margin = min(min_margin, float(np.min(margin[separated])))
            collisions += int(np.count_nonzero(separated & (margin < 1e-6)))
    return InjectivityReport(
        grid_n=grid_n, points=n, collisions=collisions // 2, min_margin=min_margin
    )
