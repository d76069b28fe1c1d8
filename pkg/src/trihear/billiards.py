"""Shortest closed billiard path in a triangle.

In an acute triangle the shortest closed path is the orbit through the feet
of the three altitudes (the orthic triangle); its perimeter is
a cos(alpha) + b cos(beta) + c cos(gamma). For right or obtuse triangles it
degenerates to the shortest altitude traversed up and down. Everything is
computed in a fixed frame with the longest side on the x-axis so the
reflection-law checks are deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import WrongKind
from .geometry import Triangle, angles_of, area_of, triangle_from_sides

Point = tuple[float, float]


@dataclass(frozen=True)
class ClosedPathInfo:
    """Shortest closed billiard path of a triangle.

    ``kind`` is "fagnano" with the three orthic points, or "altitude" with
    (foot, apex) of the shortest altitude.
    """

    length: float
    kind: str
    points: tuple[Point, ...]


@dataclass(frozen=True)
class ReflectionReport:
    """Worst deviation from the reflection law along a closed path."""

    max_angle_deviation: float
    incidence_angles: tuple[tuple[float, float], ...]


def triangle_coordinates(t: Triangle) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vertices (B, C, A): longest side from B=(0,0) to C=(a,0), apex A above."""
    a, b, c = t.sides
    xa = (a * a + c * c - b * b) / (2.0 * a)
    ya = math.sqrt(max(c * c - xa * xa, 0.0))
    return np.array([0.0, 0.0]), np.array([a, 0.0]), np.array([xa, ya])


def _foot(p: np.ndarray, q1: np.ndarray, q2: np.ndarray) -> np.ndarray:
    """Perpendicular foot of p on the line through q1, q2."""
    d = q2 - q1
    s = float(np.dot(p - q1, d) / np.dot(d, d))
    return q1 + s * d


def shortest_closed_path(t: Triangle) -> ClosedPathInfo:
    """Shortest closed billiard path; classification is exact at a right angle
    (right triangles take the altitude branch)."""
    ang = angles_of(t)
    vb, vc, va = triangle_coordinates(t)
    if ang.alpha < math.pi / 2.0:
        # Acute: orthic orbit through the altitude feet.
        fa = _foot(va, vb, vc)
        fb = _foot(vb, vc, va)
        fc = _foot(vc, va, vb)
        length = (
            t.a * math.cos(ang.alpha)
            + t.b * math.cos(ang.beta)
            + t.c * math.cos(ang.gamma)
        )
        points = (tuple(fa), tuple(fb), tuple(fc))
        return ClosedPathInfo(length=length, kind="fagnano", points=points)
    # The altitude onto the longest side is the shortest one.
    foot = np.array([va[0], 0.0])
    length = 4.0 * area_of(t) / t.a
    return ClosedPathInfo(length=length, kind="altitude", points=(tuple(foot), tuple(va)))


def _incidence_pair(
    point: np.ndarray, nb1: np.ndarray, nb2: np.ndarray, s1: np.ndarray, s2: np.ndarray
) -> tuple[float, float]:
    """Angles the two orbit segments at ``point`` make with its side (s1, s2)."""
    side = s2 - s1
    side = side / np.linalg.norm(side)

    def angle_to_side(q: np.ndarray) -> float:
        d = q - point
        d = d / np.linalg.norm(d)
        # Fold onto [0, pi/2]: incidence measured from the side line.
        cross = side[0] * d[1] - side[1] * d[0]
        return math.asin(min(1.0, abs(float(cross))))

    return angle_to_side(nb1), angle_to_side(nb2)


def reflection_law_check(info: ClosedPathInfo, t: Triangle) -> ReflectionReport:
    """Verify equal incidence and reflection angles at each orbit point."""
    if info.kind != "fagnano":
        raise WrongKind(
            "reflection-law check applies to the orthic orbit; the altitude "
            "path reflects perpendicularly by construction"
        )
    vb, vc, va = triangle_coordinates(t)
    fa, fb, fc = (np.array(p) for p in info.points)
    sides = {0: (vb, vc), 1: (vc, va), 2: (va, vb)}  # fa on BC, fb on CA, fc on AB
    orbit = [fa, fb, fc]
    pairs = []
    dev = 0.0
    for i, point in enumerate(orbit):
        prev_pt = orbit[(i - 1) % 3]
        next_pt = orbit[(i + 1) % 3]
        th_in, th_out = _incidence_pair(point, prev_pt, next_pt, *sides[i])
        pairs.append((th_in, th_out))
        dev = max(dev, abs(th_in - th_out))
    return ReflectionReport(max_angle_deviation=dev, incidence_angles=tuple(pairs))


def altitude_reflection_check(info: ClosedPathInfo, t: Triangle) -> float:
    """Deviation from perpendicularity of the altitude path at its foot."""
    if info.kind != "altitude":
        raise WrongKind("perpendicularity check applies to the altitude path")
    foot, apex = (np.array(p) for p in info.points)
    d = apex - foot
    d = d / np.linalg.norm(d)
    side = np.array([1.0, 0.0])  # longest side lies on the x-axis
    return abs(math.pi / 2.0 - math.acos(min(1.0, abs(float(np.dot(d, side))))))


@dataclass(frozen=True)
class PathTripleReport:
    """Collision scan of (area, perimeter, shortest-path length)."""

    grid_n: int
    points: int
    collisions: int
    min_margin: float


def _normalized_family(grid_n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Angle grid over the canonical chamber; sides scaled to perimeter 1."""
    idx = (np.arange(grid_n) + 0.5) / grid_n
    v, u = np.meshgrid(idx, idx, indexing="ij")
    gam = v.ravel() * (math.pi / 3.0)
    bet = gam + u.ravel() * (math.pi - 3.0 * gam) / 2.0
    alp = math.pi - bet - gam
    angles = np.stack([alp, bet, gam], axis=1)
    sines = np.sin(angles)
    sides = sines / sines.sum(axis=1, keepdims=True)
    return angles, sides, sines


def path_triple_injectivity_scan(grid_n: int) -> PathTripleReport:
    """Brute-force check that (A, P, l0) separates perimeter-1 triangles.

    Samples grid_n^2 shapes in the canonical chamber; any two whose angle
    triples differ by more than 1e-2 must differ by 1e-6 (relative) in area
    or in shortest-path length.
    """
    if grid_n < 30:
        raise ValueError(f"grid_n must be at least 30, got {grid_n}")
    angles, sides, _ = _normalized_family(grid_n)
    tris = [triangle_from_sides(*s) for s in sides]
    areas = np.array([area_of(tri) for tri in tris])
    lengths = np.array([shortest_closed_path(tri).length for tri in tris])

    n = len(angles)
    collisions = 0
    min_margin = math.inf
    block = 256
    for start in range(0, n, block):
        stop = min(start + block, n)
        d2 = np.sum((angles[start:stop, None, :] - angles[None, :, :]) ** 2, axis=2)
        da = np.abs(areas[start:stop, None] - areas[None, :]) / np.minimum(
            areas[start:stop, None], areas[None, :]
        )
        dl = np.abs(lengths[start:stop, None] - lengths[None, :]) / np.minimum(
            lengths[start:stop, None], lengths[None, :]
        )
        margin = np.maximum(da, dl)
        separated = d2 > 1e-4  # angle distance > 1e-2
        if np.any(separated):
            min_margin = min(min_margin, float(np.min(margin[separated])))
            collisions += int(np.count_nonzero(separated & (margin < 1e-6)))
    return PathTripleReport(
        grid_n=grid_n, points=n, collisions=collisions // 2, min_margin=min_margin
    )
