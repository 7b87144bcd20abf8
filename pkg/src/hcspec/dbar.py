"""Compactness analysis for the weighted Cauchy-Riemann complex on products.

A factor model captures, per bidegree ``(p, q)``, the spectrum and essential
spectrum of the complex Laplacian (the box operator) of one Hermitian factor,
together with a closed-range attestation, the Bergman space dimension, and
cohomology dimensions.  The product formulas combine two factors bidegree by
bidegree; the compactness rules read the answer off the essential spectrum of
the product, with shortcut rules (infinite Bergman space, non-compact factor
solution operator) that can decide the verdict even when parts of the factor
data are unknown.

Unknown entries are ``None``; they propagate to an undecidable verdict rather
than a guess, except where a shortcut rule applies.  Models are presumed to
describe genuine manifolds, so a spectrum that is not numerically specified is
treated as nonempty by the shortcut rules; an entry asserted to be the empty
spectrum disables them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import ToolkitError
from .gaussian_oracle import FORM_LADDER_BASE, FUNCTION_LADDER_BASE, LADDER_STEP
from .spectra import (
    AP,
    EMPTY,
    INFINITE,
    CompactnessReport,
    Mult,
    OperatorSpectrum,
    Point,
    SpectralSet,
    Verdict,
    MissingAttestationError,
    covered_by_progression,
    is_infinite,
    is_subset_of_zero,
    minkowski_sum,
    multiplicity_at,
    union,
)

__all__ = [
    "DbarFactorModel",
    "CompactnessReport",
    "Verdict",
    "BidegreeOutOfRangeError",
    "MissingSpectrumDataError",
    "BadDimensionError",
    "MissingAttestationError",
    "product_box_spectrum",
    "neumann_compactness",
    "riemann_surface_product_report",
    "builtin_models",
]


class BidegreeOutOfRangeError(ToolkitError):
    """The requested (p, q) lies outside the admissible bidegree range."""


class MissingSpectrumDataError(ToolkitError):
    """A spectrum computation needs a factor entry that is unknown."""


class BadDimensionError(ToolkitError):
    """A factor has the wrong complex dimension for the requested report."""


@dataclass(frozen=True)
class DbarFactorModel:
    """Per-bidegree spectral data of one Hermitian factor.

    ``box_spectrum`` maps every bidegree in ``{0..n} x {0..n}`` to an
    :class:`OperatorSpectrum` or ``None`` for unknown; missing entries are
    filled with ``None``.  ``bergman_dim`` and the ``cohomology_dim`` entries
    are positive-or-zero ints, ``INFINITE``, or ``None`` for unknown, and are
    cross-checked against the kernel multiplicities of the box spectra where
    both sides are specified.
    """

    name: str
    complex_dimension: int
    box_spectrum: Mapping[tuple[int, int], OperatorSpectrum | None] = field(
        default_factory=dict
    )
    closed_range: bool = False
    bergman_dim: Mult | None = None
    cohomology_dim: Mapping[tuple[int, int], Mult | None] = field(default_factory=dict)

    def __post_init__(self) -> None:
        n = self.complex_dimension
        if n < 1:
            raise BadDimensionError("complex dimension must be at least 1")
        grid: dict[tuple[int, int], OperatorSpectrum | None] = {}
        for p in range(n + 1):
            for q in range(n + 1):
                grid[(p, q)] = None
        for key, value in dict(self.box_spectrum).items():
            if key not in grid:
                raise BidegreeOutOfRangeError(
                    f"bidegree {key} outside the {n}-dimensional grid"
                )
            grid[key] = value
        object.__setattr__(self, "box_spectrum", grid)

        cohom: dict[tuple[int, int], Mult | None] = {key: None for key in grid}
        for key, value in dict(self.cohomology_dim).items():
            if key not in cohom:
                raise BidegreeOutOfRangeError(
                    f"bidegree {key} outside the {n}-dimensional grid"
                )
            cohom[key] = value
        object.__setattr__(self, "cohomology_dim", cohom)

        base = grid[(0, 0)]
        if self.bergman_dim is not None and base is not None:
            self._check_kernel_dim((0, 0), self.bergman_dim, base, "Bergman dimension")
            if is_infinite(self.bergman_dim) and not base.essential.contains(0):
                raise ValueError(
                    f"{self.name}: infinite Bergman space requires 0 in the "
                    "essential spectrum at bidegree (0, 0)"
                )
        for key, dim in cohom.items():
            entry = grid[key]
            if dim is not None and entry is not None:
                self._check_kernel_dim(key, dim, entry, "cohomology dimension")

    def _check_kernel_dim(
        self,
        key: tuple[int, int],
        dim: Mult,
        entry: OperatorSpectrum,
        label: str,
    ) -> None:
        kernel = multiplicity_at(entry.spectrum, 0)
        if is_infinite(dim) != is_infinite(kernel):
            raise ValueError(
                f"{self.name}: {label} at {key} disagrees with the kernel "
                f"multiplicity of the box spectrum ({dim} vs {kernel})"
            )
        if (
            not is_infinite(dim)
            and not covered_by_progression(entry.spectrum, 0)
            and dim != kernel
        ):
            raise ValueError(
                f"{self.name}: {label} at {key} is {dim} but the box spectrum "
                f"has kernel multiplicity {kernel}"
            )

    def entry(self, p: int, q: int) -> OperatorSpectrum | None:
        if not (0 <= p <= self.complex_dimension and 0 <= q <= self.complex_dimension):
            raise BidegreeOutOfRangeError(
                f"bidegree ({p}, {q}) outside the {self.complex_dimension}-dimensional grid"
            )
        return self.box_spectrum[(p, q)]

    def known_empty(self, p: int, q: int) -> bool:
        entry = self.box_spectrum.get((p, q))
        return entry is not None and entry.is_empty()


def _term_bidegrees(
    x: DbarFactorModel, y: DbarFactorModel, p: int, q: int
) -> list[tuple[int, int, int, int]]:
    terms = []
    for p1 in range(max(0, p - y.complex_dimension), min(p, x.complex_dimension) + 1):
        for q1 in range(max(0, q - y.complex_dimension), min(q, x.complex_dimension) + 1):
            terms.append((p1, q1, p - p1, q - q1))
    return terms


def product_box_spectrum(
    x: DbarFactorModel, y: DbarFactorModel, p: int, q: int
) -> OperatorSpectrum:
    """Spectrum and essential spectrum of the product box operator at ``(p, q)``.

    Unions over all splittings ``p = p' + p''`` and ``q = q' + q''`` of the
    Minkowski sums of the factor spectra; the essential part swaps in one
    factor's essential spectrum at a time.  Raises when a required factor
    entry is unknown.
    """
    total = x.complex_dimension + y.complex_dimension
    if not (0 <= p <= total and 0 <= q <= total):
        raise BidegreeOutOfRangeError(f"bidegree ({p}, {q}) outside [0, {total}]^2")
    spectrum = EMPTY
    essential = EMPTY
    for p1, q1, p2, q2 in _term_bidegrees(x, y, p, q):
        left = x.box_spectrum[(p1, q1)]
        right = y.box_spectrum[(p2, q2)]
        if left is None or right is None:
            raise MissingSpectrumDataError(
                f"unknown factor spectrum at {(p1, q1)} (x) {(p2, q2)}"
            )
        spectrum = union(spectrum, minkowski_sum(left.spectrum, right.spectrum))
        essential = union(essential, minkowski_sum(left.essential, right.spectrum))
        essential = union(essential, minkowski_sum(left.spectrum, right.essential))
    return OperatorSpectrum(spectrum, essential)


def _bergman_shortcut(
    infinite_side: DbarFactorModel,
    other: DbarFactorModel,
    p: int,
    q: int,
    order: str,
) -> CompactnessReport | None:
    if infinite_side.bergman_dim is None or not is_infinite(infinite_side.bergman_dim):
        return None
    if p > other.complex_dimension or q > other.complex_dimension:
        return None
    if other.known_empty(p, q):
        return None
    witness = (0, 0, p, q) if order == "left" else (p, q, 0, 0)
    essential = EMPTY
    entry = other.box_spectrum.get((p, q))
    if entry is not None:
        kernel = SpectralSet.of(Point(0, INFINITE))
        essential = minkowski_sum(kernel, entry.spectrum)
    return CompactnessReport(
        Verdict.NONCOMPACT,
        "infinite-bergman-space",
        (witness,),
        essential,
    )


def neumann_compactness(
    x: DbarFactorModel, y: DbarFactorModel, p: int, q: int
) -> CompactnessReport:
    """Compactness of the product inverse box operator at bidegree ``(p, q)``.

    Compact exactly when the essential spectrum of the product box operator is
    empty.  An infinite Bergman space on either factor forces non-compactness
    for all bidegrees within the other factor's range, even when the rest of
    the data is unknown.  Otherwise unknown entries make the verdict
    undecidable.
    """
    if not (x.closed_range and y.closed_range):
        raise MissingAttestationError(
            "compactness criteria require closed-range attestations on both factors"
        )
    total = x.complex_dimension + y.complex_dimension
    if not (0 <= p <= total and 0 <= q <= total):
        raise BidegreeOutOfRangeError(f"bidegree ({p}, {q}) outside [0, {total}]^2")

    shortcut = _bergman_shortcut(x, y, p, q, "left") or _bergman_shortcut(
        y, x, p, q, "right"
    )

    try:
        product = product_box_spectrum(x, y, p, q)
    except MissingSpectrumDataError:
        if shortcut is not None:
            return shortcut
        return CompactnessReport(Verdict.UNDECIDABLE, "unknown-factor-data", (), EMPTY)

    witnesses = []
    for p1, q1, p2, q2 in _term_bidegrees(x, y, p, q):
        left = x.box_spectrum[(p1, q1)]
        right = y.box_spectrum[(p2, q2)]
        contributes = not (
            minkowski_sum(left.essential, right.spectrum).is_empty()
            and minkowski_sum(left.spectrum, right.essential).is_empty()
        )
        if contributes:
            witnesses.append((p1, q1, p2, q2))
    if witnesses:
        return CompactnessReport(
            Verdict.NONCOMPACT,
            "factor-essential-contribution",
            tuple(witnesses),
            product.essential,
        )
    return CompactnessReport(
        Verdict.COMPACT, "essential-spectrum-empty", (), product.essential
    )


# ---------------------------------------------------------------------------
# Products of several one-dimensional factors


def _fold_minkowski(parts: Iterable[SpectralSet]) -> SpectralSet:
    result = SpectralSet.of(Point(0, 1))
    for part in parts:
        result = minkowski_sum(result, part)
    return result


def _feasible_bit_vectors(
    factors: Sequence[DbarFactorModel], q: int, fixed: dict[int, int]
) -> list[tuple[int, ...]]:
    """Bit vectors K with sum q whose chosen entries are not known-empty."""
    n = len(factors)
    free = [j for j in range(n) if j not in fixed]
    vectors = []
    for bits in itertools.product((0, 1), repeat=len(free)):
        vector = [0] * n
        for j, value in fixed.items():
            vector[j] = value
        for j, value in zip(free, bits):
            vector[j] = value
        if sum(vector) != q:
            continue
        if any(factors[j].known_empty(0, vector[j]) for j in range(n)):
            continue
        vectors.append(tuple(vector))
    return vectors


def _essential_not_within_zero(entry: OperatorSpectrum | None) -> bool:
    return entry is not None and not is_subset_of_zero(entry.essential)


def riemann_surface_product_report(
    factors: Sequence[DbarFactorModel], q: int
) -> CompactnessReport:
    """Compactness of the inverse box operator on ``(0, q)`` forms of an
    n-fold product of one-dimensional factors.

    The essential spectrum is the union, over bit vectors K of weight ``q``,
    of each factor's essential spectrum at its bit summed with the spectra of
    the others at theirs.  Shortcut rules fire first: an infinite Bergman
    space on any factor forces non-compactness for ``q <= n - 1``, and a
    factor whose solution operator is non-compact (essential spectrum beyond
    ``{0}`` at bidegree (0,0) or (0,1)) forces non-compactness for every
    ``q``.  The trace records which monotonicity rules applied.
    """
    n = len(factors)
    if n < 2:
        raise ValueError("the product report needs at least two factors")
    for factor in factors:
        if factor.complex_dimension != 1:
            raise BadDimensionError(
                f"factor {factor.name!r} has complex dimension "
                f"{factor.complex_dimension}, expected 1"
            )
    if not all(factor.closed_range for factor in factors):
        raise MissingAttestationError(
            "compactness criteria require closed-range attestations on all factors"
        )
    if not 0 <= q <= n:
        raise BidegreeOutOfRangeError(f"form degree {q} outside [0, {n}]")

    trace: list[str] = []

    def essential_at(degree: int) -> SpectralSet | None:
        essential = EMPTY
        for bits in itertools.product((0, 1), repeat=n):
            if sum(bits) != degree:
                continue
            for j in range(n):
                own = factors[j].box_spectrum[(0, bits[j])]
                others = [
                    factors[j2].box_spectrum[(0, bits[j2])] for j2 in range(n) if j2 != j
                ]
                if own is None or any(o is None for o in others):
                    return None
                term = minkowski_sum(
                    own.essential, _fold_minkowski(o.spectrum for o in others)
                )
                essential = union(essential, term)
        return essential

    computed = essential_at(q)

    for j, factor in enumerate(factors):
        if (
            factor.bergman_dim is not None
            and is_infinite(factor.bergman_dim)
            and q <= n - 1
            and _feasible_bit_vectors(factors, q, {j: 0})
        ):
            trace.append(f"factor {j} has an infinite Bergman space")
            return CompactnessReport(
                Verdict.NONCOMPACT,
                "infinite-bergman-space",
                ((j,) + (0,) * n,),
                computed if computed is not None else EMPTY,
                tuple(trace),
            )

    for j, factor in enumerate(factors):
        noncompact_solution = _essential_not_within_zero(
            factor.box_spectrum[(0, 0)]
        ) or _essential_not_within_zero(factor.box_spectrum[(0, 1)])
        if noncompact_solution and _feasible_bit_vectors(factors, q, {}):
            trace.append(f"factor {j} has a non-compact solution operator")
            return CompactnessReport(
                Verdict.NONCOMPACT,
                "noncompact-factor-solution-operator",
                ((j,) + (0,) * n,),
                computed if computed is not None else EMPTY,
                tuple(trace),
            )

    essential = computed
    if essential is None:
        return CompactnessReport(
            Verdict.UNDECIDABLE, "unknown-factor-data", (), EMPTY, tuple(trace)
        )

    bottom = essential_at(0)
    top = essential_at(n)
    if bottom is not None and not bottom.is_empty() and q <= n - 1:
        trace.append("non-compact at degree 0 propagates to all degrees below n")
    if top is not None and not top.is_empty() and q >= 1:
        trace.append("non-compact at degree n propagates to all degrees above 0")
    if 1 <= q <= n - 1 and bottom is not None and top is not None:
        trace.append("middle degrees are compact exactly when degrees 0 and n are")

    if essential.is_empty():
        return CompactnessReport(
            Verdict.COMPACT, "essential-spectrum-empty", (), essential, tuple(trace)
        )

    witnesses = []
    for bits in itertools.product((0, 1), repeat=n):
        if sum(bits) != q:
            continue
        for j in range(n):
            own = factors[j].box_spectrum[(0, bits[j])]
            others = [
                factors[j2].box_spectrum[(0, bits[j2])] for j2 in range(n) if j2 != j
            ]
            term = minkowski_sum(
                own.essential, _fold_minkowski(o.spectrum for o in others)
            )
            if not term.is_empty():
                witnesses.append((j, *bits))
    return CompactnessReport(
        Verdict.NONCOMPACT,
        "essential-spectrum-nonempty",
        tuple(witnesses),
        essential,
        tuple(trace),
    )


# ---------------------------------------------------------------------------
# Catalogue


def _mirror_p_degrees(
    entries: dict[tuple[int, int], OperatorSpectrum]
) -> dict[tuple[int, int], OperatorSpectrum]:
    """Copy (0, q) data to (1, q); adequate for line factors with flat bundles."""
    full = dict(entries)
    for (p, q), value in entries.items():
        if p == 0:
            full.setdefault((1, q), value)
    return full


def _abstract_compact_factor() -> DbarFactorModel:
    discrete = OperatorSpectrum(SpectralSet.of(Point(0, 1), AP(1, 1)))
    positive = OperatorSpectrum(SpectralSet.of(AP(1, 1)))
    return DbarFactorModel(
        name="abstract-compact-factor",
        complex_dimension=1,
        box_spectrum={(0, 0): discrete, (0, 1): positive, (1, 0): positive, (1, 1): discrete},
        closed_range=True,
        bergman_dim=1,
        cohomology_dim={(0, 0): 1, (0, 1): 0, (1, 0): 0, (1, 1): 1},
    )


def _infinite_bergman_factor() -> DbarFactorModel:
    kernel_heavy = OperatorSpectrum(SpectralSet.of(Point(0, INFINITE), AP(1, 1)))
    positive = OperatorSpectrum(SpectralSet.of(AP(1, 1)))
    return DbarFactorModel(
        name="infinite-bergman-factor",
        complex_dimension=1,
        box_spectrum=_mirror_p_degrees({(0, 0): kernel_heavy, (0, 1): positive}),
        closed_range=True,
        bergman_dim=INFINITE,
        cohomology_dim={(0, 0): INFINITE, (0, 1): 0, (1, 0): INFINITE, (1, 1): 0},
    )


def _gaussian_weight_line() -> DbarFactorModel:
    functions = OperatorSpectrum(
        SpectralSet.of(AP(FUNCTION_LADDER_BASE, LADDER_STEP, INFINITE))
    )
    forms = OperatorSpectrum(SpectralSet.of(AP(FORM_LADDER_BASE, LADDER_STEP, INFINITE)))
    return DbarFactorModel(
        name="gaussian-weight-line",
        complex_dimension=1,
        box_spectrum=_mirror_p_degrees({(0, 0): functions, (0, 1): forms}),
        closed_range=True,
        bergman_dim=INFINITE,
        cohomology_dim={(0, 0): INFINITE, (0, 1): 0, (1, 0): INFINITE, (1, 1): 0},
    )


def builtin_models() -> dict[str, DbarFactorModel]:
    """Named factor models shipped with the package.

    The Gaussian entry's progression parameters come from the ladder-operator
    oracle in :mod:`hcspec.gaussian_oracle` and are regenerated by the test
    suite rather than trusted as typed-in constants.
    """
    models = [
        _abstract_compact_factor(),
        _infinite_bergman_factor(),
        _gaussian_weight_line(),
    ]
    return {model.name: model for model in models}
