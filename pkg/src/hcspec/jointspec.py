"""Joint spectra of commuting normal matrix pairs.

A normal matrix splits into commuting Hermitian real and imaginary parts, so
a strongly commuting normal pair yields four pairwise commuting Hermitian
matrices.  Simultaneous diagonalization proceeds by eigendecomposing the
first, clustering its eigenvalues, and recursing on the remaining matrices
restricted to each cluster subspace.  Joint eigenvalues are then read off as
Rayleigh quotients and validated by residual.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .errors import ToolkitError
from .numerics import (
    DEFAULT_TOL,
    KRONECKER_DIM_CAP,
    Tolerance,
    as_complex_matrix,
    hermitian_eig,
    kronecker,
    max_abs,
    zero_matrix,
)
from .spectra import Point, SpectralSet, enumerate_below, is_infinite, minkowski_sum

# Relative gap below which eigenvalues are treated as one eigenspace.
CLUSTER_GAP_FACTOR = 1e-6


class NotNormalError(ToolkitError):
    """A matrix fails the normality check."""


class NotCommutingError(ToolkitError):
    """The pair fails the commutation check."""


class NotPSDError(ToolkitError):
    """A matrix required to be positive semidefinite is not."""


class EigenspaceSplitFailureError(ToolkitError):
    """Clustered eigenvalues could not be split within tolerance."""


@dataclass(frozen=True)
class CommutingPair:
    """A validated pair of commuting normal matrices."""

    t: np.ndarray
    s: np.ndarray
    commutator_norm: float


def check_pair(t, s, tol: Tolerance = DEFAULT_TOL) -> CommutingPair:
    """Validate normality of both matrices and their commutation."""
    t = as_complex_matrix(t)
    s = as_complex_matrix(s)
    if t.shape[0] != t.shape[1] or s.shape[0] != s.shape[1]:
        raise ValueError("both matrices must be square")
    if t.shape != s.shape:
        raise ValueError(f"size mismatch: {t.shape} vs {s.shape}")
    for name, m in (("first", t), ("second", s)):
        if max_abs(m @ m.conj().T - m.conj().T @ m) > tol.identity_check:
            raise NotNormalError(f"{name} matrix is not normal within tolerance")
    commutator = max_abs(t @ s - s @ t)
    if commutator > tol.identity_check:
        raise NotCommutingError(
            f"commutator max-norm {commutator:.3e} exceeds {tol.identity_check:.3e}"
        )
    return CommutingPair(t, s, commutator)


def _clusters(values: np.ndarray) -> list[tuple[int, int]]:
    """Consecutive index ranges of eigenvalues within the cluster gap."""
    if values.size == 0:
        return []
    diameter = float(values[-1] - values[0])
    threshold = CLUSTER_GAP_FACTOR * (diameter + 1.0)
    ranges: list[tuple[int, int]] = []
    start = 0
    for idx in range(1, values.size):
        if values[idx] - values[idx - 1] > threshold:
            ranges.append((start, idx))
            start = idx
    ranges.append((start, values.size))
    return ranges


def _simdiag(mats: Sequence[np.ndarray], tol: Tolerance) -> np.ndarray:
    """Unitary basis simultaneously diagonalizing commuting Hermitian matrices."""
    n = mats[0].shape[0] if mats else 0
    if not mats or n == 0:
        return np.eye(n, dtype=np.complex128)
    head, rest = mats[0], mats[1:]
    dec = hermitian_eig(head, tol)
    if not rest:
        return dec.vectors
    basis = np.array(dec.vectors, copy=True)
    for start, stop in _clusters(dec.eigenvalues):
        if stop - start == 1:
            continue
        block = basis[:, start:stop]
        restricted = [
            (block.conj().T @ m @ block + (block.conj().T @ m @ block).conj().T) / 2.0
            for m in rest
        ]
        inner = _simdiag(restricted, tol)
        basis[:, start:stop] = block @ inner
    return basis


@dataclass(frozen=True)
class JointSpectrumPoints:
    """Joint eigenvalue pairs (one per basis column) and the joint eigenbasis.

    Pairs are sorted lexicographically by (Re, Im) of the first then second
    component; the column count equals the matrix dimension, so multiplicity
    is carried by repetition.
    """

    pairs: tuple[tuple[complex, complex], ...]
    basis: np.ndarray


def joint_spectrum(pair: CommutingPair, tol: Tolerance = DEFAULT_TOL) -> JointSpectrumPoints:
    """Simultaneous diagonalization of a commuting normal pair.

    Raises ``EigenspaceSplitFailureError`` when some joint eigenvector fails
    the residual bound, which happens for eigenvalues clustered beyond what
    the gap threshold can separate.
    """
    t, s = pair.t, pair.s
    n = t.shape[0]
    if n == 0:
        return JointSpectrumPoints((), zero_matrix(0, 0))
    herm_parts = [
        (t + t.conj().T) / 2.0,
        (t - t.conj().T) / 2.0j,
        (s + s.conj().T) / 2.0,
        (s - s.conj().T) / 2.0j,
    ]
    basis = _simdiag(herm_parts, tol)
    lams = np.einsum("ij,ik,kj->j", basis.conj(), t, basis)
    mus = np.einsum("ij,ik,kj->j", basis.conj(), s, basis)
    residual_t = np.linalg.norm(t @ basis - basis * lams, axis=0)
    residual_s = np.linalg.norm(s @ basis - basis * mus, axis=0)
    worst = float(max(residual_t.max(), residual_s.max()))
    if worst > 10.0 * tol.eigen_residual:
        raise EigenspaceSplitFailureError(
            f"joint eigenvector residual {worst:.3e} exceeds "
            f"{10.0 * tol.eigen_residual:.3e}; eigenvalues too clustered"
        )
    order = sorted(
        range(n),
        key=lambda idx: (lams[idx].real, lams[idx].imag, mus[idx].real, mus[idx].imag),
    )
    pairs = tuple((complex(lams[idx]), complex(mus[idx])) for idx in order)
    sorted_basis = basis[:, order]
    sorted_basis.setflags(write=False)
    return JointSpectrumPoints(pairs, sorted_basis)


def tensor_pair_spectrum(
    t, s, tol: Tolerance = DEFAULT_TOL, dim_cap: int = KRONECKER_DIM_CAP
) -> JointSpectrumPoints:
    """Joint spectrum of ``(T (x) I, I (x) S)`` for normal T and S.

    Equals the Cartesian product of the individual spectra as a multiset.
    """
    t = as_complex_matrix(t)
    s = as_complex_matrix(s)
    big_t = kronecker(t, np.eye(s.shape[0]), dim_cap)
    big_s = kronecker(np.eye(t.shape[0]), s, dim_cap)
    return joint_spectrum(check_pair(big_t, big_s, tol), tol)


def spectral_mapping(
    points: JointSpectrumPoints, f: Callable[[complex, complex], complex]
) -> tuple[complex, ...]:
    """Image multiset ``{f(lam, mu)}`` with multiplicities carried."""
    values = [complex(f(lam, mu)) for lam, mu in points.pairs]
    return tuple(sorted(values, key=lambda z: (z.real, z.imag)))


def pairing_gap(
    left: Sequence[tuple[complex, complex]],
    right: Sequence[tuple[complex, complex]],
    decimals: int = 8,
) -> float:
    """Largest componentwise distance between two pair multisets.

    Both sides are sorted lexicographically (rounded to stabilize ties), so
    the gap is meaningful for multisets that agree up to small perturbations.
    Returns infinity on a length mismatch.
    """
    if len(left) != len(right):
        return float("inf")

    def key(pair: tuple[complex, complex]):
        lam, mu = pair
        return (
            round(lam.real, decimals),
            round(lam.imag, decimals),
            round(mu.real, decimals),
            round(mu.imag, decimals),
        )

    gap = 0.0
    for (a, b), (c, d) in zip(sorted(left, key=key), sorted(right, key=key)):
        gap = max(gap, abs(a - c), abs(b - d))
    return gap


@dataclass(frozen=True)
class SumOperatorReport:
    """Eigenvalues of ``T (x) I + I (x) S`` against pairwise eigenvalue sums."""

    eigenvalues: tuple[float, ...]
    expected: tuple[float, ...]
    max_gap: float
    symbolic_max_gap: float
    passed: bool


def sum_operator_check(
    t,
    s,
    tol: Tolerance = DEFAULT_TOL,
    gap: float = 1e-7,
    dim_cap: int = KRONECKER_DIM_CAP,
) -> SumOperatorReport:
    """Verify the sum-operator spectrum two ways for Hermitian PSD inputs.

    Numerically: the assembled operator's eigenvalues must match all pairwise
    sums of factor eigenvalues after sorting.  Symbolically: spectral sets
    built from the factor eigenvalue multisets must reproduce the same values
    through the exact Minkowski sum.
    """
    t = as_complex_matrix(t)
    s = as_complex_matrix(s)
    eig_t = hermitian_eig(t, tol).eigenvalues
    eig_s = hermitian_eig(s, tol).eigenvalues
    for name, values in (("first", eig_t), ("second", eig_s)):
        if values.size and float(values[0]) < -1e-9:
            raise NotPSDError(f"{name} matrix has eigenvalue {values[0]:.3e} < -1e-9")
    assembled = kronecker(t, np.eye(s.shape[0]), dim_cap) + kronecker(
        np.eye(t.shape[0]), s, dim_cap
    )
    eigenvalues = hermitian_eig(assembled, tol).eigenvalues
    expected = sorted(float(a + b) for a in eig_t for b in eig_s)
    if len(expected) != eigenvalues.size:
        raise AssertionError("dimension bookkeeping is broken")
    max_gap = max(
        (abs(float(x) - y) for x, y in zip(eigenvalues, expected)), default=0.0
    )

    lhs = SpectralSet.of(*(Point(Fraction(max(float(v), 0.0)), 1) for v in eig_t)) \
        if eig_t.size else SpectralSet.of()
    rhs = SpectralSet.of(*(Point(Fraction(max(float(v), 0.0)), 1) for v in eig_s)) \
        if eig_s.size else SpectralSet.of()
    symbolic_gap = 0.0
    if eig_t.size and eig_s.size:
        bound = Fraction(float(eigenvalues[-1])) + 1
        listed: list[float] = []
        for value, mult in enumerate_below(minkowski_sum(lhs, rhs), bound):
            assert not is_infinite(mult)
            listed.extend([float(value)] * int(mult))
        listed.sort()
        if len(listed) != eigenvalues.size:
            symbolic_gap = float("inf")
        else:
            symbolic_gap = max(
                (abs(float(x) - y) for x, y in zip(eigenvalues, listed)), default=0.0
            )
    passed = max_gap <= gap and symbolic_gap <= gap
    return SumOperatorReport(
        tuple(float(v) for v in eigenvalues),
        tuple(expected),
        max_gap,
        symbolic_gap,
        passed,
    )
