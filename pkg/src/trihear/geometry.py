"""Exact triangle arithmetic: sides, angles, and the three hearable invariants.

A triangle is stored by its sorted side lengths. The quantities of interest
are its area A, perimeter P, and the sum R of the reciprocals of its interior
angles; together they pin the triangle down up to congruence. The short-time
heat-trace coefficients of the triangle are algebraic in (A, P, R), so both
directions of that dictionary live here as well.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NonPositiveSide, TriangleInequalityViolated

FOUR_PI = 4.0 * math.pi
EIGHT_SQRT_PI = 8.0 * math.sqrt(math.pi)
#: Minimum of 1/alpha + 1/beta + 1/gamma over all triangles (equilateral).
MIN_RECIP_SUM = 9.0 / math.pi
#: Minimum of P^2/(4A) over all triangles (equilateral, isoperimetric bound).
MIN_HALF_COT_SUM = 3.0 * math.sqrt(3.0)
#: Angle triples must sum to pi within this absolute tolerance.
ANGLE_SUM_TOL = 1e-12


@dataclass(frozen=True)
class Triangle:
    """Euclidean triangle as side lengths in canonical order a >= b >= c > 0."""

    a: float
    b: float
    c: float

    def __post_init__(self) -> None:
        sides = (self.a, self.b, self.c)
        if not all(math.isfinite(s) and s > 0 for s in sides):
            raise NonPositiveSide(f"sides must be positive and finite, got {sides}")
        if not (self.a >= self.b >= self.c):
            raise ValueError(
                f"sides must be sorted descending, got {sides}; "
                "use triangle_from_sides() for unsorted input"
            )
        if self.b + self.c <= self.a:
            raise TriangleInequalityViolated(
                f"degenerate sides {sides}: need b + c > a"
            )

    @property
    def sides(self) -> tuple[float, float, float]:
        return (self.a, self.b, self.c)

    def scaled(self, factor: float) -> "Triangle":
        if not (math.isfinite(factor) and factor > 0):
            raise ValueError(f"scale factor must be positive, got {factor}")
        return Triangle(self.a * factor, self.b * factor, self.c * factor)


@dataclass(frozen=True)
class AnglePoint:
    """Interior angles of a marked triangle; positive, summing to pi."""

    alpha: float
    beta: float
    gamma: float

    def __post_init__(self) -> None:
        angles = (self.alpha, self.beta, self.gamma)
        if not all(math.isfinite(t) and t > 0 for t in angles):
            raise ValueError(f"angles must be positive and finite, got {angles}")
        if abs(self.alpha + self.beta + self.gamma - math.pi) > ANGLE_SUM_TOL:
            raise ValueError(
                f"angles must sum to pi within {ANGLE_SUM_TOL}, got {angles}"
            )

    @property
    def angles(self) -> tuple[float, float, float]:
        return (self.alpha, self.beta, self.gamma)


@dataclass(frozen=True)
class InvariantTriple:
    """Area, perimeter, and reciprocal-angle sum of a triangle."""

    area: float
    perimeter: float
    recip_angle_sum: float

    def __post_init__(self) -> None:
        vals = (self.area, self.perimeter, self.recip_angle_sum)
        if not all(math.isfinite(v) and v > 0 for v in vals):
            raise ValueError(f"invariants must be positive and finite, got {vals}")


@dataclass(frozen=True)
class HeatCoefficients:
    """Coefficients of the small-time heat-trace expansion.

    The trace of the Dirichlet heat semigroup of a polygon behaves like
    ``a0/t + a_half/sqrt(t) + a1`` up to an exponentially small remainder;
    ``a0`` carries the area, ``a_half`` the perimeter, and ``a1`` the corner
    data. For genuine polygons a0 > 0 and a_half < 0; fitted instances may
    carry noise and are validated downstream.
    """

    a0: float
    a_half: float
    a1: float


@dataclass(frozen=True)
class CotangentIdentity:
    """Both sides (and the product form) of the half-angle cotangent identity."""

    lhs: float      # P^2 / (4A)
    rhs: float      # cot(alpha/2) + cot(beta/2) + cot(gamma/2)
    product: float  # cot(alpha/2) * cot(beta/2) * cot(gamma/2)


def triangle_from_sides(a: float, b: float, c: float) -> Triangle:
    """Validate and canonically sort three side lengths."""
    sides = (float(a), float(b), float(c))
    if not all(math.isfinite(s) and s > 0 for s in sides):
        raise NonPositiveSide(f"sides must be positive and finite, got {sides}")
    s1, s2, s3 = sorted(sides, reverse=True)
    return Triangle(s1, s2, s3)


def area_of(t: Triangle) -> float:
    """Triangle area, Heron's formula in the cancellation-safe ordering."""
    a, b, c = t.sides
    # Factors grouped so each subtraction is between nearby magnitudes.
    prod = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c))
    return 0.25 * math.sqrt(prod)


def angles_of(t: Triangle) -> AnglePoint:
    """Interior angles opposite (a, b, c), renormalized to sum exactly to pi."""
    a, b, c = t.sides
    cos_alpha = (b * b + c * c - a * a) / (2.0 * b * c)
    cos_beta = (a * a + c * c - b * b) / (2.0 * a * c)
    alpha = math.acos(min(1.0, max(-1.0, cos_alpha)))
    beta = math.acos(min(1.0, max(-1.0, cos_beta)))
    gamma = math.pi - alpha - beta
    return AnglePoint(alpha, beta, gamma)


def invariants_of(t: Triangle) -> InvariantTriple:
    """The hearable triple (A, P, R) of a triangle."""
    p = angles_of(t)
    recip = 1.0 / p.alpha + 1.0 / p.beta + 1.0 / p.gamma
    return InvariantTriple(area_of(t), t.a + t.b + t.c, recip)


def cot_identity_sides(t: Triangle) -> CotangentIdentity:
    """Evaluate P^2/(4A) against the half-angle cotangent sum and product.

    The three values agree exactly in real arithmetic; the returned floats
    agree to ~1e-12 relative for non-degenerate triangles (the right-hand
    sides go through the actual angles, so extreme needles lose digits to
    the conditioning of arccos).
    """
    inv = invariants_of(t)
    lhs = inv.perimeter * inv.perimeter / (4.0 * inv.area)
    cots = [1.0 / math.tan(theta / 2.0) for theta in angles_of(t).angles]
    return CotangentIdentity(lhs, sum(cots), cots[0] * cots[1] * cots[2])


def heat_coefficients(inv: InvariantTriple) -> HeatCoefficients:
    """Heat-trace coefficients of a triangle with the given invariants."""
    return HeatCoefficients(
        a0=inv.area / FOUR_PI,
        a_half=-inv.perimeter / EIGHT_SQRT_PI,
        a1=(math.pi / 24.0) * inv.recip_angle_sum - 1.0 / 24.0,
    )


def heat_coefficients_polygon(area: float, perimeter: float,
                              angles: "list[float] | tuple[float, ...]") -> HeatCoefficients:
    """Heat-trace coefficients of a polygon from its corner angles.

    A straight corner (angle pi) contributes nothing to the corner sum.
    """
    if area <= 0 or perimeter <= 0:
        raise ValueError("area and perimeter must be positive")
    if any(not (0 < th < 2 * math.pi) for th in angles):
        raise ValueError("corner angles must lie in (0, 2*pi)")
    corner = sum(math.pi / th - th / math.pi for th in angles)
    return HeatCoefficients(
        a0=area / FOUR_PI,
        a_half=-perimeter / EIGHT_SQRT_PI,
        a1=corner / 24.0,
    )


def invariants_from_heat(coeffs: HeatCoefficients) -> InvariantTriple:
    """Invert the triangle heat coefficients back to (A, P, R)."""
    return InvariantTriple(
        area=FOUR_PI * coeffs.a0,
        perimeter=-EIGHT_SQRT_PI * coeffs.a_half,
        recip_angle_sum=(24.0 * coeffs.a1 + 1.0) / math.pi,
    )
