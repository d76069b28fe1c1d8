"""Planar domains and structured triangulations with exact boundaries.

Two domain kinds are meshed: triangles (as an affine image of the uniformly
subdivided reference triangle, so the boundary is represented exactly) and
lattice polygons whose edges are axis-parallel segments or diagonals of unit
cells. Lattice polygons are meshed by splitting every unit cell into 2n^2
congruent right triangles, choosing each cell's diagonal direction to match
any boundary diagonal running through it; membership and boundary tests are
done in integer arithmetic, so no element ever straddles the boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Union

import numpy as np

from .errors import UnsupportedDomain
from .geometry import Triangle, area_of

# Lattice directions in counterclockwise order, one per multiple of 45 degrees.
_OCTANTS = {
    (1, 0): 0, (1, 1): 1, (0, 1): 2, (-1, 1): 3,
    (-1, 0): 4, (-1, -1): 5, (0, -1): 6, (1, -1): 7,
}


def _sign(v: int) -> int:
    return (v > 0) - (v < 0)


def _segments_intersect(p1, p2, p3, p4) -> bool:
    """Exact test whether closed integer segments share any point."""

    def orient(a, b, c):
        return _sign((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))

    def on_segment(a, b, c):
        return (min(a[0], b[0]) <= c[0] <= max(a[0], b[0])
                and min(a[1], b[1]) <= c[1] <= max(a[1], b[1]))

    o1, o2 = orient(p1, p2, p3), orient(p1, p2, p4)
    o3, o4 = orient(p3, p4, p1), orient(p3, p4, p2)
    if o1 != o2 and o3 != o4:
        return True
    if o1 == 0 and on_segment(p1, p2, p3):
        return True
    if o2 == 0 and on_segment(p1, p2, p4):
        return True
    if o3 == 0 and on_segment(p3, p4, p1):
        return True
    if o4 == 0 and on_segment(p3, p4, p2):
        return True
    return False


@dataclass(frozen=True)
class GridPolygon:
    """Simple lattice polygon with axis-parallel or diagonal edges.

    Vertices are integer pairs; orientation is normalized to counterclockwise.
    Diagonal edges may span several cells (they decompose into unit-cell
    diagonals), anything with another slope is rejected.
    """

    vertices: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        verts = tuple((int(x), int(y)) for x, y in self.vertices)
        if len(verts) < 3:
            raise ValueError("polygon needs at least three vertices")
        if len(set(verts)) != len(verts):
            raise ValueError("repeated vertex")
        for (x1, y1), (x2, y2) in self._edge_pairs(verts):
            dx, dy = x2 - x1, y2 - y1
            if dx == 0 and dy == 0:
                raise ValueError("zero-length edge")
            if not (dx == 0 or dy == 0 or abs(dx) == abs(dy)):
                raise UnsupportedDomain(
                    f"edge ({x1},{y1})->({x2},{y2}) is neither axis-parallel "
                    "nor a unit-cell diagonal"
                )
        n = len(verts)
        edges = list(self._edge_pairs(verts))
        for i in range(n):
            for j in range(i + 1, n):
                adjacent = j == i + 1 or (i == 0 and j == n - 1)
                if adjacent:
                    continue
                if _segments_intersect(*edges[i], *edges[j]):
                    raise ValueError("polygon boundary self-intersects")
        area2 = sum(
            x1 * y2 - x2 * y1 for (x1, y1), (x2, y2) in self._edge_pairs(verts)
        )
        if area2 == 0:
            raise ValueError("polygon has zero area")
        if area2 < 0:
            verts = (verts[0],) + tuple(reversed(verts[1:]))
        object.__setattr__(self, "vertices", verts)

    @staticmethod
    def _edge_pairs(verts):
        n = len(verts)
        return [(verts[i], verts[(i + 1) % n]) for i in range(n)]

    @property
    def edges(self) -> list[tuple[tuple[int, int], tuple[int, int]]]:
        return self._edge_pairs(self.vertices)

    def doubled_area(self) -> int:
        return sum(x1 * y2 - x2 * y1 for (x1, y1), (x2, y2) in self.edges)

    def area(self) -> float:
        return self.doubled_area() / 2.0

    def perimeter_counts(self) -> tuple[int, int]:
        """Perimeter as exact counts of (axis-parallel, diagonal) unit steps."""
        straight = diag = 0
        for (x1, y1), (x2, y2) in self.edges:
            dx, dy = abs(x2 - x1), abs(y2 - y1)
            if dx == 0 or dy == 0:
                straight += dx + dy
            else:
                diag += dx
        return straight, diag

    def perimeter(self) -> float:
        straight, diag = self.perimeter_counts()
        return straight + diag * math.sqrt(2.0)

    def unit_edges(self) -> list[tuple[tuple[int, int], tuple[int, int]]]:
        """Boundary decomposed into unit steps (length 1 or sqrt(2))."""
        out = []
        for (x1, y1), (x2, y2) in self.edges:
            steps = max(abs(x2 - x1), abs(y2 - y1))
            sx, sy = _sign(x2 - x1), _sign(y2 - y1)
            for s in range(steps):
                out.append(((x1 + s * sx, y1 + s * sy),
                            (x1 + (s + 1) * sx, y1 + (s + 1) * sy)))
        return out

    def corner_quarters(self) -> tuple[int, ...]:
        """Interior angles in units of pi/4 (exact, from edge octants)."""
        verts = self.vertices
        n = len(verts)
        out = []
        for i in range(n):
            x0, y0 = verts[(i - 1) % n]
            x1, y1 = verts[i]
            x2, y2 = verts[(i + 1) % n]
            o_in = _OCTANTS[(_sign(x1 - x0), _sign(y1 - y0))]
            o_out = _OCTANTS[(_sign(x2 - x1), _sign(y2 - y1))]
            turn = (o_out - o_in) % 8  # counterclockwise turn in pi/4 units
            if turn > 4:
                turn -= 8
            if turn == 4 or turn == -4:
                raise ValueError(f"degenerate reversal at vertex {verts[i]}")
            out.append(4 - turn)
        return tuple(out)

    def interior_angles(self) -> tuple[float, ...]:
        return tuple(q * math.pi / 4.0 for q in self.corner_quarters())

    def bounding_box(self) -> tuple[int, int, int, int]:
        xs = [v[0] for v in self.vertices]
        ys = [v[1] for v in self.vertices]
        return min(xs), min(ys), max(xs), max(ys)

    def contains(self, px: int, py: int, scale: int) -> bool:
        """Even-odd test for the point (px/scale, py/scale), exact in integers.

        The point must not lie on the boundary.
        """
        count = 0
        for (ax, ay), (bx, by) in self.edges:
            x1, y1, x2, y2 = ax * scale, ay * scale, bx * scale, by * scale
            if (y1 <= py) == (y2 <= py):
                continue
            s = (x2 - x1) * (py - y1) - (px - x1) * (y2 - y1)
            if (s > 0) == (y2 > y1):
                count += 1
        return count % 2 == 1

    def on_boundary(self, px: int, py: int, scale: int) -> bool:
        """Exact test whether (px/scale, py/scale) lies on some edge."""
        for (ax, ay), (bx, by) in self.edges:
            x1, y1, x2, y2 = ax * scale, ay * scale, bx * scale, by * scale
            cross = (x2 - x1) * (py - y1) - (y2 - y1) * (px - x1)
            if cross != 0:
                continue
            if min(x1, x2) <= px <= max(x1, x2) and min(y1, y2) <= py <= max(y1, y2):
                return True
        return False


PlanarDomain = Union[Triangle, GridPolygon]


@dataclass
class Mesh:
    """Conforming piecewise-linear mesh of a planar domain."""

    nodes: np.ndarray          # (N, 2) float coordinates
    triangles: np.ndarray      # (M, 3) node indices, counterclockwise
    boundary: np.ndarray       # (N,) True exactly for nodes on the domain boundary
    h: float                   # characteristic element size
    domain: str                # human-readable domain descriptor
    area: float                # exact domain area
    perimeter: float           # exact domain perimeter

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_elements(self) -> int:
        return len(self.triangles)

    @property
    def n_interior(self) -> int:
        return int(np.count_nonzero(~self.boundary))


def _triangle_mesh(t: Triangle, n: int) -> Mesh:
    a, b, c = t.sides
    xa = (a * a + c * c - b * b) / (2.0 * a)
    ya = math.sqrt(max(c * c - xa * xa, 0.0))
    corner_b = np.array([0.0, 0.0])
    corner_c = np.array([a, 0.0])
    corner_a = np.array([xa, ya])

    index = {}
    nodes = []
    boundary = []
    for i in range(n + 1):
        for j in range(n + 1 - i):
            index[(i, j)] = len(nodes)
            p = corner_b + (i / n) * (corner_c - corner_b) + (j / n) * (corner_a - corner_b)
            nodes.append(p)
            boundary.append(i == 0 or j == 0 or i + j == n)
    tris = []
    for i in range(n):
        for j in range(n - i):
            tris.append((index[(i, j)], index[(i + 1, j)], index[(i, j + 1)]))
            if i + j < n - 1:
                tris.append((index[(i + 1, j)], index[(i + 1, j + 1)], index[(i, j + 1)]))
    return Mesh(
        nodes=np.array(nodes),
        triangles=np.array(tris, dtype=np.int64),
        boundary=np.array(boundary, dtype=bool),
        h=a / n,
        domain=f"triangle {a!r} {b!r} {c!r}",
        area=area_of(t),
        perimeter=a + b + c,
    )


def _cell_orientations(poly: GridPolygon) -> dict[tuple[int, int], str]:
    """Diagonal direction forced on each unit cell by the boundary.

    'A' runs bottom-left to top-right, 'B' top-left to bottom-right.
    """
    forced: dict[tuple[int, int], str] = {}
    for (x1, y1), (x2, y2) in poly.unit_edges():
        if x1 == x2 or y1 == y2:
            continue
        cell = (min(x1, x2), min(y1, y2))
        orient = "A" if (x2 - x1) == (y2 - y1) else "B"
        if forced.setdefault(cell, orient) != orient:
            raise UnsupportedDomain(f"conflicting diagonals in cell {cell}")
    return forced


def _polygon_mesh(poly: GridPolygon, n: int) -> Mesh:
    forced = _cell_orientations(poly)
    x0, y0, x1, y1 = poly.bounding_box()

    index: dict[tuple[int, int], int] = {}
    node_keys: list[tuple[int, int]] = []
    tris: list[tuple[int, int, int]] = []

    def node_id(p: tuple[int, int]) -> int:
        i = index.get(p)
        if i is None:
            i = len(node_keys)
            index[p] = i
            node_keys.append(p)
        return i

    for cx in range(x0, x1):
        for cy in range(y0, y1):
            orient = forced.get((cx, cy), "A")
            bx, by = cx * n, cy * n
            for i in range(n):
                for j in range(n):
                    p00 = (bx + i, by + j)
                    p10 = (bx + i + 1, by + j)
                    p01 = (bx + i, by + j + 1)
                    p11 = (bx + i + 1, by + j + 1)
                    if orient == "A":
                        cand = ((p00, p10, p11), (p00, p11, p01))
                    else:
                        cand = ((p00, p10, p01), (p10, p11, p01))
                    for tri in cand:
                        cx3 = tri[0][0] + tri[1][0] + tri[2][0]
                        cy3 = tri[0][1] + tri[1][1] + tri[2][1]
                        # Centroid in units of 1/(3n); never on the boundary.
                        if poly.contains(cx3, cy3, 3 * n):
                            tris.append(tuple(node_id(p) for p in tri))

    if not tris:
        raise UnsupportedDomain("polygon produced an empty mesh")
    nodes = np.array(node_keys, dtype=float) / n
    boundary = np.array(
        [poly.on_boundary(px, py, n) for px, py in node_keys], dtype=bool
    )
    straight, diag = poly.perimeter_counts()
    return Mesh(
        nodes=nodes,
        triangles=np.array(tris, dtype=np.int64),
        boundary=boundary,
        h=1.0 / n,
        domain=f"grid-polygon {list(poly.vertices)}",
        area=poly.area(),
        perimeter=poly.perimeter(),
    )


def build_mesh(domain: PlanarDomain, n: int) -> Mesh:
    """Structured mesh with subdivision count n (element size ~ 1/n)."""
    if n < 1:
        raise ValueError(f"subdivision count must be positive, got {n}")
    if isinstance(domain, Triangle):
        return _triangle_mesh(domain, n)
    if isinstance(domain, GridPolygon):
        return _polygon_mesh(domain, n)
    raise UnsupportedDomain(f"cannot mesh {type(domain).__name__}")
