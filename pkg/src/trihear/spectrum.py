"""Dirichlet eigenvalues: finite elements, exact oracles, and bookkeeping.

Eigenvalues are computed with piecewise-linear conforming elements and a
consistent mass matrix on the structured meshes from :mod:`trihear.mesh`;
the generalized problem on the interior nodes is solved by shift-inverted
Lanczos iteration (dense for small problems). Two triangle families have
closed-form spectra and serve as oracles. Spectra travel between tools as
plain text: one eigenvalue per line, '#'-prefixed metadata.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field, replace
from typing import TextIO

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.linalg import eigh
from scipy.special import erfc

from .errors import (
    MismatchedInputs,
    NotEnoughInteriorNodes,
    SolverDivergence,
)
from .mesh import Mesh

#: Problems at or below this many interior unknowns are solved densely.
_DENSE_CUTOFF = 300
_MAXITER = 500


@dataclass(frozen=True)
class Spectrum:
    """Ascending Dirichlet eigenvalues with domain metadata.

    ``method`` is "fem", "exact", or "richardson"; ``h`` is the mesh size for
    discretized spectra (0 for exact ones). ``area`` and ``perimeter`` carry
    the exact domain data used for tail estimates downstream.
    """

    eigenvalues: np.ndarray
    domain: str
    method: str
    h: float = 0.0
    area: "float | None" = None
    perimeter: "float | None" = None

    def __post_init__(self) -> None:
        vals = np.asarray(self.eigenvalues, dtype=float)
        if vals.ndim != 1 or len(vals) == 0:
            raise ValueError("spectrum needs a nonempty 1-D eigenvalue list")
        if not np.all(np.isfinite(vals)) or vals[0] <= 0.0:
            raise ValueError("eigenvalues must be finite and positive")
        if np.any(np.diff(vals) < 0.0):
            raise ValueError("eigenvalues must be nondecreasing")
        object.__setattr__(self, "eigenvalues", vals)

    @property
    def k(self) -> int:
        return len(self.eigenvalues)

    @property
    def lam_max(self) -> float:
        return float(self.eigenvalues[-1])

    def scaled(self, factor: float) -> "Spectrum":
        """Spectrum of the domain dilated by ``factor`` (eigenvalues /factor^2)."""
        return replace(
            self,
            eigenvalues=self.eigenvalues / factor**2,
            h=self.h * factor,
            area=None if self.area is None else self.area * factor**2,
            perimeter=None if self.perimeter is None else self.perimeter * factor,
        )


def assemble(mesh: Mesh) -> tuple[sp.csr_matrix, sp.csr_matrix]:
    """Stiffness and consistent mass matrices on all mesh nodes."""
    tri = mesh.triangles
    pts = mesh.nodes[tri]  # (M, 3, 2)
    x, y = pts[..., 0], pts[..., 1]
    b = np.stack([y[:, 1] - y[:, 2], y[:, 2] - y[:, 0], y[:, 0] - y[:, 1]], axis=1)
    c = np.stack([x[:, 2] - x[:, 1], x[:, 0] - x[:, 2], x[:, 1] - x[:, 0]], axis=1)
    area2 = x[:, 0] * b[:, 0] + x[:, 1] * b[:, 1] + x[:, 2] * b[:, 2]
    if np.any(area2 <= 0.0):
        raise ValueError("mesh contains a non-positively-oriented element")

    k_local = (b[:, :, None] * b[:, None, :] + c[:, :, None] * c[:, None, :]) / (
        2.0 * area2[:, None, None]
    )
    m_pattern = (np.ones((3, 3)) + np.eye(3)) / 24.0
    m_local = area2[:, None, None] * m_pattern[None, :, :]

    rows = np.repeat(tri, 3, axis=1).ravel()
    cols = np.tile(tri, (1, 3)).ravel()
    n = mesh.n_nodes
    stiffness = sp.coo_matrix((k_local.ravel(), (rows, cols)), shape=(n, n)).tocsr()
    mass = sp.coo_matrix((m_local.ravel(), (rows, cols)), shape=(n, n)).tocsr()
    return stiffness, mass


def solve_lowest(mesh: Mesh, k: int, return_modes: bool = False):
    """Smallest k Dirichlet eigenvalues of the mesh, ascending.

    Deterministic: the iterative solver starts from a fixed vector, and small
    problems go through a dense symmetric solve. Returns the spectrum, or
    (spectrum, modes) with modes as columns over all mesh nodes (zero on the
    boundary, mass-orthonormal) when ``return_modes`` is set.
    """
    if k < 1:
        raise ValueError(f"need k >= 1, got {k}")
    interior = np.flatnonzero(~mesh.boundary)
    n_int = len(interior)
    if n_int < k:
        raise NotEnoughInteriorNodes(
            f"mesh has {n_int} interior nodes, need at least {k}"
        )
    stiffness, mass = assemble(mesh)
    k_int = stiffness[interior][:, interior]
    m_int = mass[interior][:, interior]

    if n_int <= _DENSE_CUTOFF or k > n_int - 2:
        vals, vecs = eigh(
            k_int.toarray(), m_int.toarray(), subset_by_index=(0, k - 1)
        )
    else:
        v0 = np.full(n_int, 1.0 / math.sqrt(n_int))
        try:
            vals, vecs = spla.eigsh(
                k_int, k=k, M=m_int, sigma=0.0, which="LM", v0=v0, maxiter=_MAXITER
            )
        except spla.ArpackNoConvergence as exc:
            raise SolverDivergence(f"eigenvalue iteration failed: {exc}") from exc
        order = np.argsort(vals)
        vals, vecs = vals[order], vecs[:, order]

    spec = Spectrum(
        eigenvalues=vals,
        domain=mesh.domain,
        method="fem",
        h=mesh.h,
        area=mesh.area,
        perimeter=mesh.perimeter,
    )
    if not return_modes:
        return spec
    modes = np.zeros((mesh.n_nodes, k))
    modes[interior] = vecs
    return spec, modes


# ---------------------------------------------------------------------------
# Exact oracles
# ---------------------------------------------------------------------------


def exact_half_square(leg: float, k: int) -> Spectrum:
    """Spectrum of the right isosceles triangle with the given leg length.

    Eigenvalues are (pi/leg)^2 (m^2 + n^2) over integers m > n >= 1: the
    antisymmetric modes of the square of side ``leg``.
    """
    if leg <= 0:
        raise ValueError("leg must be positive")
    if k < 1:
        raise ValueError("need k >= 1")
    vals = []
    bound = 5.0
    while len(vals) < k:
        bound *= 2.0
        vals = [
            float(m * m + n * n)
            for m in range(2, int(math.isqrt(int(bound))) + 2)
            for n in range(1, m)
            if m * m + n * n <= bound
        ]
    vals.sort()
    lam = (math.pi / leg) ** 2 * np.array(vals[:k])
    return Spectrum(
        eigenvalues=lam,
        domain=f"half-square {leg!r}",
        method="exact",
        h=0.0,
        area=leg * leg / 2.0,
        perimeter=2.0 * leg + math.sqrt(2.0) * leg,
    )


def exact_half_square_below(leg: float, lam_max: float) -> Spectrum:
    """All half-square eigenvalues up to ``lam_max``."""
    if lam_max <= 2.0 * (math.pi / leg) ** 2:
        raise ValueError("lam_max below the fundamental eigenvalue")
    bound = lam_max * leg * leg / math.pi**2
    vals = sorted(
        float(m * m + n * n)
        for m in range(2, int(math.isqrt(int(bound))) + 2)
        for n in range(1, m)
        if m * m + n * n <= bound
    )
    lam = (math.pi / leg) ** 2 * np.array(vals)
    return Spectrum(
        eigenvalues=lam,
        domain=f"half-square {leg!r}",
        method="exact",
        h=0.0,
        area=leg * leg / 2.0,
        perimeter=2.0 * leg + math.sqrt(2.0) * leg,
    )


def exact_equilateral(side: float, k: int) -> Spectrum:
    """Spectrum of the equilateral triangle with the given side length.

    Eigenvalues are (16 pi^2 / (9 side^2)) (m^2 + m n + n^2) over integers
    m, n >= 1, doubled when m != n. Cross-validated against the finite
    element solver under refinement before being trusted.
    """
    if side <= 0:
        raise ValueError("side must be positive")
    if k < 1:
        raise ValueError("need k >= 1")
    vals: list[float] = []
    bound = 5.0
    while len(vals) < k:
        bound *= 2.0
        vals = []
        top = int(math.isqrt(int(bound))) + 2
        for m in range(1, top):
            for n in range(m, top):
                q = m * m + m * n + n * n
                if q <= bound:
                    vals.append(float(q))
                    if m != n:
                        vals.append(float(q))
        vals.sort()
    lam = (16.0 * math.pi**2 / (9.0 * side * side)) * np.array(vals[:k])
    return Spectrum(
        eigenvalues=lam,
        domain=f"equilateral {side!r}",
        method="exact",
        h=0.0,
        area=math.sqrt(3.0) / 4.0 * side * side,
        perimeter=3.0 * side,
    )


# ---------------------------------------------------------------------------
# Counting and extrapolation
# ---------------------------------------------------------------------------


def weyl_count(area: float, perimeter: float, lam: float) -> float:
    """Two-term eigenvalue-count estimate N(lam) ~ A lam/4pi - P sqrt(lam)/4pi."""
    if area <= 0 or perimeter <= 0 or lam <= 0:
        raise ValueError("area, perimeter, and lam must be positive")
    return area / (4.0 * math.pi) * lam - perimeter / (4.0 * math.pi) * math.sqrt(lam)


def weyl_tail(area: float, perimeter: float, lam_cut: float, t: float) -> float:
    """Estimated heat-trace mass beyond ``lam_cut``: integral of e^(-lam t)
    against the two-term counting density, clipped at zero."""
    if t <= 0:
        raise ValueError("t must be positive")
    x = lam_cut * t
    bulk = area / (4.0 * math.pi * t) * math.exp(-x)
    edge = perimeter / (8.0 * math.sqrt(math.pi * t)) * erfc(math.sqrt(x))
    return max(bulk - edge, 0.0)


def richardson_extrapolate(coarse: Spectrum, fine: Spectrum) -> Spectrum:
    """Cancel the leading O(h^2) eigenvalue error between two mesh levels.

    Assumes the fine mesh halves the element size; with identical inputs the
    output equals them (fixed point of the formula).
    """
    if coarse.domain != fine.domain:
        raise MismatchedInputs("spectra come from different domains")
    if coarse.k != fine.k:
        raise MismatchedInputs("spectra have different eigenvalue counts")
    if coarse.method != "fem" or fine.method != "fem":
        raise MismatchedInputs("extrapolation applies to finite element spectra")
    if fine.h > coarse.h:
        raise MismatchedInputs("second spectrum must come from the finer mesh")
    vals = np.sort((4.0 * fine.eigenvalues - coarse.eigenvalues) / 3.0)
    return Spectrum(
        eigenvalues=vals,
        domain=fine.domain,
        method="richardson",
        h=fine.h,
        area=fine.area,
        perimeter=fine.perimeter,
    )


# ---------------------------------------------------------------------------
# Text interchange format
# ---------------------------------------------------------------------------


def save_spectrum(spec: Spectrum, dest: "str | TextIO") -> None:
    """Write a spectrum: '#' metadata lines, then one eigenvalue per line."""
    lines = [
        f"# domain: {spec.domain}",
        f"# method: {spec.method}",
        f"# h: {spec.h!r}",
        f"# k: {spec.k}",
    ]
    if spec.area is not None:
        lines.append(f"# area: {spec.area!r}")
    if spec.perimeter is not None:
        lines.append(f"# perimeter: {spec.perimeter!r}")
    lines.extend(f"{v:.17g}" for v in spec.eigenvalues)
    text = "\n".join(lines) + "\n"
    if isinstance(dest, str):
        with open(dest, "w", encoding="ascii") as fh:
            fh.write(text)
    else:
        dest.write(text)


def load_spectrum(src: "str | TextIO") -> Spectrum:
    """Parse the text format written by :func:`save_spectrum`."""
    if isinstance(src, str):
        with open(src, "r", encoding="ascii") as fh:
            content = fh.read()
    else:
        content = src.read()
    meta: dict[str, str] = {}
    vals: list[float] = []
    for ln, raw in enumerate(content.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if ":" in body:
                key, _, value = body.partition(":")
                meta[key.strip()] = value.strip()
            continue
        try:
            vals.append(float(line))
        except ValueError as exc:
            raise ValueError(f"line {ln}: not an eigenvalue: {raw!r}") from exc
    if not vals:
        raise ValueError("no eigenvalues in spectrum file")

    def opt_float(key: str) -> "float | None":
        return float(meta[key]) if key in meta else None

    return Spectrum(
        eigenvalues=np.array(vals),
        domain=meta.get("domain", "unknown"),
        method=meta.get("method", "unknown"),
        h=opt_float("h") or 0.0,
        area=opt_float("area"),
        perimeter=opt_float("perimeter"),
    )
