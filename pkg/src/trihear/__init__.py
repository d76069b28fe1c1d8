"""Hear the shape of a triangle.

A triangle is pinned down, up to congruence, by three quantities every
Dirichlet spectrum reveals: area, perimeter, and the sum of the reciprocals
of its angles. This package computes those invariants exactly, recovers the
triangle from them with a solver whose convergence is structural (convex
level curves, monotone coupling), and validates the whole chain numerically
from finite element eigenvalues through heat-trace fits to reconstruction.
"""

from .billiards import (
    ClosedPathInfo,
    path_triple_injectivity_scan,
    reflection_law_check,
    shortest_closed_path,
)
from .drums import compare_spectra, corner_sum_exact, gww_pair, lattice_congruent
from .errors import (
    DomainError,
    IllConditionedWindow,
    InconsistentInvariants,
    InfeasibleTarget,
    MismatchedInputs,
    NoConvergence,
    NonPhysical,
    NonPositiveSide,
    NotEnoughInteriorNodes,
    SolverDivergence,
    TailTooLarge,
    TriangleInequalityViolated,
    TrihearError,
    UnsupportedDomain,
    WrongKind,
)
from .geometry import (
    AnglePoint,
    CotangentIdentity,
    HeatCoefficients,
    InvariantTriple,
    Triangle,
    angles_of,
    area_of,
    cot_identity_sides,
    heat_coefficients,
    heat_coefficients_polygon,
    invariants_from_heat,
    invariants_of,
    triangle_from_sides,
)
from .heat import (
    HeatFit,
    HeatSample,
    fit_expansion,
    hear_invariants,
    hear_pipeline,
    hear_triangle,
    synthesize,
)
from .mesh import GridPolygon, Mesh, build_mesh
from .reconstruct import (
    ReconstructionResult,
    injectivity_scan,
    reconstruct_angles,
    reconstruct_triangle,
    reconstruct_triangles,
)
from .spectrum import (
    Spectrum,
    exact_equilateral,
    exact_half_square,
    load_spectrum,
    richardson_extrapolate,
    save_spectrum,
    solve_lowest,
    weyl_count,
)

__version__ = "0.1.0"
