"""Derivation oracle for the Gaussian-weighted Cauchy-Riemann Laplacians.

For the weighted complex on the plane with weight ``exp(-|z|^2)``, conjugation
by ``exp(-|z|^2 / 2)`` turns the weighted Cauchy-Riemann operator into
``a = (a_x + i a_y) / sqrt(2)`` where ``a_x, a_y`` are the standard harmonic
oscillator lowering operators, so the function-level Laplacian is ``a* a`` and
the form-level one is ``a a*``.  Truncating ``a_x`` and ``a_y`` at a finite
level gives matrix models that are exact on the subspace of bounded total
oscillator number: lowering never leaves the truncation, so the restricted
matrices have the true eigenvalues.

The catalogue entry for this factor freezes the spectra derived here: a unit
ladder starting at 0 on functions and at 1 on forms, every level of infinite
multiplicity, the latter witnessed by level counts that grow without bound as
the truncation grows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Frozen conclusions of the oracle, consumed by the model catalogue.
FUNCTION_LADDER_BASE = 0
FORM_LADDER_BASE = 1
LADDER_STEP = 1


def lowering_matrix(levels: int) -> np.ndarray:
    """Oscillator lowering operator truncated to ``levels + 1`` states."""
    a = np.zeros((levels + 1, levels + 1))
    for n in range(1, levels + 1):
        a[n - 1, n] = np.sqrt(n)
    return a


def _plane_lowering(levels: int) -> np.ndarray:
    ax = np.kron(lowering_matrix(levels), np.eye(levels + 1))
    ay = np.kron(np.eye(levels + 1), lowering_matrix(levels))
    return (ax + 1j * ay) / np.sqrt(2.0)


def _total_number_indices(levels: int, bound: int) -> np.ndarray:
    pairs = [
        nx * (levels + 1) + ny
        for nx in range(levels + 1)
        for ny in range(levels + 1)
        if nx + ny <= bound
    ]
    return np.array(pairs, dtype=int)


@dataclass(frozen=True)
class LadderSpectrum:
    """Eigenvalues of one truncated weighted Laplacian, grouped by level."""

    truncation: int
    eigenvalues: tuple[float, ...]
    level_counts: dict[int, int]


def _group_levels(eigenvalues: np.ndarray, atol: float = 1e-8) -> dict[int, int]:
    counts: dict[int, int] = {}
    for value in eigenvalues:
        level = round(float(value))
        if abs(float(value) - level) > atol:
            raise ArithmeticError(
                f"eigenvalue {value!r} is not within {atol} of an integer level"
            )
        counts[level] = counts.get(level, 0) + 1
    return counts


def function_laplacian_spectrum(truncation: int) -> LadderSpectrum:
    """Spectrum of ``a* a`` restricted to total oscillator number <= truncation."""
    a = _plane_lowering(truncation)
    box = a.conj().T @ a
    keep = _total_number_indices(truncation, truncation)
    box = box[np.ix_(keep, keep)]
    values = np.linalg.eigvalsh((box + box.conj().T) / 2.0)
    return LadderSpectrum(truncation, tuple(map(float, values)), _group_levels(values))


def form_laplacian_spectrum(truncation: int) -> LadderSpectrum:
    """Spectrum of ``a a*`` restricted to total oscillator number <= truncation - 1."""
    a = _plane_lowering(truncation)
    box = a @ a.conj().T
    keep = _total_number_indices(truncation, truncation - 1)
    box = box[np.ix_(keep, keep)]
    values = np.linalg.eigvalsh((box + box.conj().T) / 2.0)
    return LadderSpectrum(truncation, tuple(map(float, values)), _group_levels(values))


def derive_catalogue_values(truncation: int = 8) -> dict[str, object]:
    """Re-derive the frozen catalogue values and report the evidence.

    The multiplicity of every level increases with the truncation, which is
    the finite-matrix witness of infinite multiplicity on the full space.
    """
    small = function_laplacian_spectrum(truncation - 2)
    large = function_laplacian_spectrum(truncation)
    forms = form_laplacian_spectrum(truncation)
    growing = all(
        large.level_counts[level] > small.level_counts[level]
        for level in small.level_counts
    )
    return {
        "function_levels": sorted(large.level_counts),
        "form_levels": sorted(forms.level_counts),
        "function_base": min(large.level_counts),
        "form_base": min(forms.level_counts),
        "step": 1,
        "multiplicities_grow_with_truncation": growing,
    }
