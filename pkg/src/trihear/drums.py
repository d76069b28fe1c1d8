"""The classical pair of isospectral, non-congruent lattice drums.

Both polygons are unions of seven half-square cells with equal area,
perimeter, and corner data, yet they are not related by any plane isometry.
Their Dirichlet spectra coincide exactly; numerically this shows up as the
per-eigenvalue gap between the two finite element spectra shrinking with
mesh refinement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .mesh import GridPolygon, build_mesh
from .spectrum import solve_lowest

DRUM_1_VERTICES = ((2, 0), (3, 1), (3, 2), (1, 2), (1, 3), (0, 2), (1, 1), (2, 1))
DRUM_2_VERTICES = ((2, 0), (2, 1), (3, 1), (2, 2), (1, 2), (1, 3), (0, 3), (0, 2))


def gww_pair() -> tuple[GridPolygon, GridPolygon]:
    """The two drums, as lattice polygons."""
    return GridPolygon(DRUM_1_VERTICES), GridPolygon(DRUM_2_VERTICES)


def corner_sum_exact(poly: GridPolygon) -> Fraction:
    """Corner contribution sum over vertices, exact.

    Every interior angle of a lattice-diagonal polygon is q * pi/4 for an
    integer q, so each term pi/angle - angle/pi equals 4/q - q/4 exactly.
    """
    total = Fraction(0)
    for q in poly.corner_quarters():
        total += Fraction(4, q) - Fraction(q, 4)
    return total


def _normalized_edge_set(verts) -> frozenset:
    xs = [v[0] for v in verts]
    ys = [v[1] for v in verts]
    dx, dy = min(xs), min(ys)
    shifted = [(x - dx, y - dy) for x, y in verts]
    n = len(shifted)
    return frozenset(
        frozenset((shifted[i], shifted[(i + 1) % n])) for i in range(n)
    )


def lattice_congruent(p1: GridPolygon, p2: GridPolygon) -> bool:
    """Whether some lattice isometry plus translation maps p1 onto p2.

    Exhaustive over the eight signed-axis maps; comparison is on translated
    edge sets, so vertex ordering and starting point do not matter.
    """
    target = _normalized_edge_set(p2.vertices)
    transforms = [
        lambda x, y: (x, y), lambda x, y: (-x, y),
        lambda x, y: (x, -y), lambda x, y: (-x, -y),
        lambda x, y: (y, x), lambda x, y: (-y, x),
        lambda x, y: (y, -x), lambda x, y: (-y, -x),
    ]
    for tf in transforms:
        image = [tf(x, y) for x, y in p1.vertices]
        if _normalized_edge_set(image) == target:
            return True
    return False


@dataclass(frozen=True)
class LevelGaps:
    """Per-eigenvalue relative gaps between the drums at one mesh level."""

    n: int
    gaps: tuple[float, ...]

    @property
    def max_gap(self) -> float:
        return max(self.gaps)


@dataclass(frozen=True)
class IsospectralReport:
    """Gap-versus-refinement table for the drum pair."""

    k: int
    levels: tuple[LevelGaps, ...]

    @property
    def max_gaps(self) -> tuple[float, ...]:
        return tuple(level.max_gap for level in self.levels)

    @property
    def monotone_decreasing(self) -> bool:
        gaps = self.max_gaps
        return all(gaps[i + 1] < gaps[i] for i in range(len(gaps) - 1))


def compare_spectra(k: int, n_levels: "list[int] | tuple[int, ...]") -> IsospectralReport:
    """Solve both drums at each refinement level and tabulate the gaps."""
    if k < 1:
        raise ValueError("need k >= 1")
    levels = [int(n) for n in n_levels]
    if levels != sorted(levels):
        raise ValueError("refinement levels must be ascending")
    drum1, drum2 = gww_pair()
    out = []
    for n in levels:
        s1 = solve_lowest(build_mesh(drum1, n), k)
        s2 = solve_lowest(build_mesh(drum2, n), k)
        gaps = tuple(
            float(abs(a - b) / a)
            for a, b in zip(s1.eigenvalues, s2.eigenvalues)
        )
        out.append(LevelGaps(n=n, gaps=gaps))
    return IsospectralReport(k=k, levels=tuple(out))
