"""Finite-dimensional Hilbert complexes.

A complex stores a contiguous degree window, the dimension of each graded
piece, and the differential matrices between consecutive pieces.  Degrees
outside the window are zero spaces.  On top of that this module provides the
Laplacians, the Hodge decomposition, cohomology dimensions, the norm-minimal
solution operator, the inverse-of-Laplacian, and the operator identities that
tie them together, all as checkable dense-matrix statements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import ToolkitError
from .numerics import (
    DEFAULT_TOL,
    Tolerance,
    as_complex_matrix,
    hermitian_eig,
    max_abs,
    numeric_rank,
    pseudo_inverse,
    range_projection,
    zero_matrix,
)


class ShapeMismatchError(ToolkitError):
    """A differential's shape does not match the graded dimensions."""


class DegreeOutOfRangeError(ToolkitError):
    """The requested degree lies outside the complex's window."""


class InconsistentRankError(ToolkitError):
    """Kernel and rank-nullity cohomology counts disagree (tolerance trouble)."""


@dataclass(frozen=True, eq=False)
class FiniteComplex:
    """Graded dimensions plus differentials ``d_i: H_i -> H_{i+1}``.

    ``dims[n]`` is the dimension at degree ``lo + n``.  A missing differential
    is the zero map.  Shapes are validated on construction; the cochain
    condition ``d_{i+1} d_i = 0`` is checked by :func:`validate`.
    """

    lo: int
    dims: tuple[int, ...]
    differentials: Mapping[int, np.ndarray] = field(default_factory=dict)

    def __post_init__(self) -> None:
        dims = tuple(int(d) for d in self.dims)
        if not dims:
            raise ShapeMismatchError("a complex needs at least one degree")
        if any(d < 0 for d in dims):
            raise ShapeMismatchError("dimensions must be nonnegative")
        object.__setattr__(self, "dims", dims)
        cleaned: dict[int, np.ndarray] = {}
        for degree, matrix in dict(self.differentials).items():
            matrix = as_complex_matrix(matrix)
            expected = (self.dim(degree + 1), self.dim(degree))
            if matrix.shape != expected:
                raise ShapeMismatchError(
                    f"differential at degree {degree} has shape {matrix.shape}, "
                    f"expected {expected}"
                )
            cleaned[degree] = matrix
        object.__setattr__(self, "differentials", cleaned)

    @property
    def hi(self) -> int:
        return self.lo + len(self.dims) - 1

    @property
    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def dim(self, degree: int) -> int:
        if self.lo <= degree <= self.hi:
            return self.dims[degree - self.lo]
        return 0

    def differential(self, degree: int) -> np.ndarray:
        """The matrix of ``d_degree``; a zero map when absent or out of window."""
        found = self.differentials.get(degree)
        if found is not None:
            return found
        return zero_matrix(self.dim(degree + 1), self.dim(degree))

    def support(self) -> frozenset[int]:
        return frozenset(d for d in self.degrees if self.dim(d) > 0)

    def _require_degree(self, degree: int) -> None:
        if not self.lo <= degree <= self.hi:
            raise DegreeOutOfRangeError(
                f"degree {degree} outside window [{self.lo}, {self.hi}]"
            )


@dataclass(frozen=True)
class ValidationReport:
    """Max-norm residuals of ``d_{i+1} d_i`` per degree."""

    residuals: Mapping[int, float]
    passed: bool


def validate(complex_: FiniteComplex, tol: Tolerance = DEFAULT_TOL) -> ValidationReport:
    """Check the cochain condition ``d o d = 0`` within ``tol.identity_check``."""
    residuals: dict[int, float] = {}
    for degree in range(complex_.lo, complex_.hi):
        lower = complex_.differential(degree)
        upper = complex_.differential(degree + 1)
        residuals[degree] = max_abs(upper @ lower)
    passed = all(r <= tol.identity_check for r in residuals.values())
    return ValidationReport(residuals, passed)


def _complement_basis(projector: np.ndarray, tol: Tolerance) -> np.ndarray:
    """Orthonormal columns spanning the complement of a projector's range."""
    n = projector.shape[0]
    dec = hermitian_eig(np.eye(n) - projector, tol)
    return dec.vectors[:, dec.eigenvalues > 0.5]


def random_complex(
    dims: tuple[int, ...] | list[int],
    seed: int,
    lo: int = 0,
    tol: Tolerance = DEFAULT_TOL,
) -> FiniteComplex:
    """Deterministic random complex with ``d o d = 0`` enforced by construction.

    Each differential is a complex Gaussian draw composed with the projection
    onto the orthogonal complement of the previous differential's range, which
    kills the composite up to floating error.  The projection is applied in
    factored form, through an orthonormal basis of the complement, so the
    constructed matrix has no stray singular values straddling the rank
    cutoff.
    """
    dims = tuple(int(d) for d in dims)
    rng = np.random.default_rng(seed)
    differentials: dict[int, np.ndarray] = {}
    previous: np.ndarray | None = None
    for offset in range(len(dims) - 1):
        rows, cols = dims[offset + 1], dims[offset]
        if previous is not None and previous.size:
            complement = _complement_basis(range_projection(previous, tol), tol)
        else:
            complement = np.eye(cols, dtype=np.complex128)
        width = complement.shape[1]
        draw = rng.standard_normal((rows, width)) + 1j * rng.standard_normal((rows, width))
        matrix = np.asarray(draw / math.sqrt(2.0)) @ complement.conj().T
        if rows and cols and width:
            differentials[lo + offset] = matrix
        else:
            matrix = zero_matrix(rows, cols)
        previous = matrix
    return FiniteComplex(lo, dims, differentials)


def laplacian(complex_: FiniteComplex, degree: int) -> np.ndarray:
    """``d_i^* d_i + d_{i-1} d_{i-1}^*`` at the given degree."""
    complex_._require_degree(degree)
    return _laplacian_any(complex_, degree)


def _laplacian_any(complex_: FiniteComplex, degree: int) -> np.ndarray:
    down = complex_.differential(degree - 1)
    up = complex_.differential(degree)
    return up.conj().T @ up + down @ down.conj().T


@dataclass(frozen=True)
class HodgeSplit:
    """The three orthogonal projectors of the Hodge decomposition at one degree."""

    degree: int
    p_harmonic: np.ndarray
    p_range_d: np.ndarray
    p_range_dstar: np.ndarray
    harmonic_dim: int


def hodge(complex_: FiniteComplex, degree: int, tol: Tolerance = DEFAULT_TOL) -> HodgeSplit:
    """Split ``H_i`` into harmonic space, range of d, and range of d-star."""
    complex_._require_degree(degree)
    delta = _laplacian_any(complex_, degree)
    n = delta.shape[0]
    if n == 0:
        empty = zero_matrix(0, 0)
        return HodgeSplit(degree, empty, empty, empty, 0)
    dec = hermitian_eig(delta, tol)
    values = np.clip(dec.eigenvalues, 0.0, None)
    sigma_max = float(values[-1]) if values.size else 0.0
    cutoff = tol.rank_cutoff(n, sigma_max)
    kernel = dec.vectors[:, values <= cutoff]
    p_harm = kernel @ kernel.conj().T
    p_range_d = range_projection(complex_.differential(degree - 1), tol)
    p_range_dstar = range_projection(complex_.differential(degree).conj().T, tol)
    return HodgeSplit(degree, p_harm, p_range_d, p_range_dstar, kernel.shape[1])


def cohomology_dim(
    complex_: FiniteComplex, degree: int, tol: Tolerance = DEFAULT_TOL
) -> int:
    """Dimension of the degree-``degree`` cohomology, cross-checked two ways.

    The kernel dimension of the Laplacian must agree with the rank-nullity
    count ``dim - rank(d_i) - rank(d_{i-1})``; a disagreement signals that the
    rank threshold is unreliable for this input.
    """
    complex_._require_degree(degree)
    split = hodge(complex_, degree, tol)
    by_rank = (
        complex_.dim(degree)
        - numeric_rank(complex_.differential(degree), tol)
        - numeric_rank(complex_.differential(degree - 1), tol)
    )
    if split.harmonic_dim != by_rank:
        raise InconsistentRankError(
            f"kernel dimension {split.harmonic_dim} vs rank-nullity {by_rank} "
            f"at degree {degree}"
        )
    return split.harmonic_dim


def solution_operator(
    complex_: FiniteComplex, degree: int, tol: Tolerance = DEFAULT_TOL
) -> np.ndarray:
    """Norm-minimal solution operator ``S_i: H_i -> H_{i-1}``.

    The pseudo-inverse of ``d_{i-1}`` solves ``d x = y`` with ``x`` orthogonal
    to the kernel and vanishes on the orthogonal complement of the range.
    """
    complex_._require_degree(degree)
    return _solution_operator_any(complex_, degree, tol)


def _solution_operator_any(
    complex_: FiniteComplex, degree: int, tol: Tolerance
) -> np.ndarray:
    return pseudo_inverse(complex_.differential(degree - 1), tol)


def laplacian_inverse(
    complex_: FiniteComplex, degree: int, tol: Tolerance = DEFAULT_TOL
) -> np.ndarray:
    """``N_i``, the pseudo-inverse of the Laplacian, zero on the harmonic space."""
    complex_._require_degree(degree)
    return _laplacian_inverse_any(complex_, degree, tol)


def _laplacian_inverse_any(
    complex_: FiniteComplex, degree: int, tol: Tolerance
) -> np.ndarray:
    return pseudo_inverse(_laplacian_any(complex_, degree), tol)


@dataclass(frozen=True)
class IdentityReport:
    """Max-norm residuals of the operator identities linking S, N, and d."""

    residuals: Mapping[str, float]
    passed: bool


def check_identities(
    complex_: FiniteComplex, degree: int, tol: Tolerance = DEFAULT_TOL
) -> IdentityReport:
    """Residuals of the standard identities at one degree.

    Checks, in max-norm: ``S = d* N``; the projection formula
    ``I - P_ker(d) = d* N d``; the commutation ``d N = N d``; and
    ``N = S* S + S S*`` with the zero-extended solution operators.
    Adjacent out-of-window degrees are treated as zero spaces.
    """
    d_prev = complex_.differential(degree - 1)
    d_here = complex_.differential(degree)
    n_here = _laplacian_inverse_any(complex_, degree, tol)
    n_up = _laplacian_inverse_any(complex_, degree + 1, tol)
    s_here = _solution_operator_any(complex_, degree, tol)
    s_up = pseudo_inverse(d_here, tol)

    residuals = {
        "solution-from-inverse": max_abs(s_here - d_prev.conj().T @ n_here),
        "kernel-complement-formula": max_abs(
            range_projection(d_here.conj().T, tol) - d_here.conj().T @ n_up @ d_here
        ),
        "inverse-commutes-with-d": max_abs(d_here @ n_here - n_up @ d_here),
        "inverse-from-solutions": max_abs(
            n_here - (s_here.conj().T @ s_here + s_up @ s_up.conj().T)
        ),
    }
    passed = all(r <= tol.identity_check for r in residuals.values())
    return IdentityReport(residuals, passed)


def basic_estimate_constant(
    complex_: FiniteComplex, degree: int, tol: Tolerance = DEFAULT_TOL
) -> float:
    """Best constant C with ``|x|^2 <= C (|d x|^2 + |d* x|^2)`` off the kernel.

    Returns the reciprocal of the smallest positive Laplacian eigenvalue,
    infinity when the Laplacian vanishes on a nonzero space, and 0 for a zero
    space.
    """
    if complex_.dim(degree) == 0:
        return 0.0
    delta = _laplacian_any(complex_, degree)
    dec = hermitian_eig(delta, tol)
    values = np.clip(dec.eigenvalues, 0.0, None)
    sigma_max = float(values[-1]) if values.size else 0.0
    cutoff = tol.rank_cutoff(delta.shape[0], sigma_max)
    positive = values[values > cutoff]
    if positive.size == 0:
        return math.inf
    return float(1.0 / positive[0])


def spectrum_multiset(
    complex_: FiniteComplex, degree: int, tol: Tolerance = DEFAULT_TOL
) -> list[float]:
    """Ascending Laplacian eigenvalues at one degree, negatives clamped to 0."""
    if complex_.dim(degree) == 0:
        return []
    delta = _laplacian_any(complex_, degree)
    dec = hermitian_eig(delta, tol)
    return [float(v) for v in np.clip(dec.eigenvalues, 0.0, None)]


@dataclass(frozen=True)
class NondegeneracyReport:
    nondegenerate: bool
    witnesses: Mapping[int, bool]


def is_nondegenerate(
    complex_: FiniteComplex, tol: Tolerance = DEFAULT_TOL
) -> NondegeneracyReport:
    """Every supported degree must touch at least one nonzero differential."""
    witnesses: dict[int, bool] = {}
    for degree in complex_.degrees:
        if complex_.dim(degree) == 0:
            continue
        touched = (
            max_abs(complex_.differential(degree - 1)) > tol.identity_check
            or max_abs(complex_.differential(degree)) > tol.identity_check
        )
        witnesses[degree] = touched
    return NondegeneracyReport(all(witnesses.values()), witnesses)
