"""Exception types shared across the package."""


class TrihearError(Exception):
    """Base class for all package-specific failures."""


class NonPositiveSide(TrihearError):
    """A triangle side is zero, negative, or not finite."""


class TriangleInequalityViolated(TrihearError):
    """The two shorter sides do not strictly exceed the longest."""


class DomainError(TrihearError):
    """Argument outside the open interval a function is defined on."""


class InfeasibleTarget(TrihearError):
    """No triangle attains the requested invariant values."""


class NoConvergence(TrihearError):
    """Iterative solve exhausted its iteration budget above tolerance."""


class InconsistentInvariants(TrihearError):
    """A recovered triangle fails to reproduce the requested invariants."""


class UnsupportedDomain(TrihearError):
    """Polygon edge is neither axis-parallel nor a unit-cell diagonal."""


class NotEnoughInteriorNodes(TrihearError):
    """Mesh has fewer interior nodes than requested eigenvalues."""


class SolverDivergence(TrihearError):
    """Eigenvalue iteration failed to converge within its cap."""


class MismatchedInputs(TrihearError):
    """Two spectra cannot be combined (different domain or count)."""


class IllConditionedWindow(TrihearError):
    """Fit window is degenerate or the normal system is near-singular."""


class TailTooLarge(TrihearError):
    """Spectral truncation error too large for a trustworthy fit."""


class NonPhysical(TrihearError):
    """Fitted coefficients imply impossible geometry."""


class WrongKind(TrihearError):
    """Operation applies to the other kind of closed path."""
