"""Exact symbolic algebra of spectra of positive self-adjoint operators.

A spectral set is a finite union of atoms, each either a single point or an
upward arithmetic progression ``{base + n*step : n >= 0}``, with values in the
nonnegative rationals.  Atoms carry a per-point multiplicity annotation that is
either a positive integer or infinite.  This atom class is closed under union
and Minkowski sum (the sum of two progressions is governed by the numerical
semigroup generated by their step ratio), and it supports an exact essential
part: within the class the only way a value can belong to the essential
spectrum is to carry infinite multiplicity, since progressions have no finite
accumulation points.

Multiplicity bookkeeping is exact for isolated points, but a Minkowski sum of
two progressions produces tail points whose true multiplicities vary from
point to point.  A progression atom stores a single annotation, so on such
tails only the finite/infinite distinction is meaningful; the annotation then
records the product of the input annotations as a nominal value.  The
enumeration oracle compares sums at this class level, and exactly for inputs
consisting of points only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .errors import ToolkitError

#: Infinite multiplicity marker.  Finite multiplicities are positive ints.
INFINITE: float = math.inf

Mult = Union[int, float]
RationalLike = Union[Fraction, int, str]


class EssentialNotContainedError(ToolkitError):
    """An asserted essential spectrum has a point outside the spectrum."""


class MissingAttestationError(ToolkitError):
    """A compactness question was posed without closed-range attestations."""


def as_rational(value: RationalLike) -> Fraction:
    """Coerce ints, Fractions, and strings like ``"3/2"`` to ``Fraction``."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a rational number")


def is_infinite(mult: Mult) -> bool:
    return isinstance(mult, float) and math.isinf(mult)


def _check_mult(mult: Mult) -> Mult:
    if is_infinite(mult):
        return INFINITE
    if isinstance(mult, int) and not isinstance(mult, bool) and mult >= 1:
        return mult
    raise ValueError(f"multiplicity must be a positive integer or INFINITE, got {mult!r}")


def _frac_gcd(a: Fraction, b: Fraction) -> Fraction:
    return Fraction(
        math.gcd(a.numerator * b.denominator, b.numerator * a.denominator),
        a.denominator * b.denominator,
    )


@dataclass(frozen=True)
class Point:
    """A single spectral value with its multiplicity."""

    value: Fraction
    mult: Mult = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", as_rational(self.value))
        object.__setattr__(self, "mult", _check_mult(self.mult))
        if self.value < 0:
            raise ValueError("spectral values must be nonnegative")

    def covers(self, v: Fraction) -> bool:
        return self.value == v


@dataclass(frozen=True)
class AP:
    """The arithmetic progression ``{base + n*step : n >= 0}``."""

    base: Fraction
    step: Fraction
    mult: Mult = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "base", as_rational(self.base))
        object.__setattr__(self, "step", as_rational(self.step))
        object.__setattr__(self, "mult", _check_mult(self.mult))
        if self.base < 0:
            raise ValueError("progression base must be nonnegative")
        if self.step <= 0:
            raise ValueError("progression step must be positive")

    def covers(self, v: Fraction) -> bool:
        if v < self.base:
            return False
        q = (v - self.base) / self.step
        return q.denominator == 1

    def contains_ap(self, other: "AP") -> bool:
        if other.base < self.base:
            return False
        if (other.step / self.step).denominator != 1:
            return False
        return ((other.base - self.base) / self.step).denominator == 1


Atom = Union[Point, AP]


@dataclass(frozen=True)
class SpectralSet:
    """A normalized finite union of spectral atoms; ``()`` is the empty spectrum.

    Build instances through :func:`normalize` (or the convenience classmethod
    :meth:`of`); the constructor trusts its argument.
    """

    atoms: tuple[Atom, ...] = ()

    @classmethod
    def of(cls, *atoms: Atom) -> "SpectralSet":
        return normalize(atoms)

    def is_empty(self) -> bool:
        return not self.atoms

    def contains(self, value: RationalLike) -> bool:
        v = as_rational(value)
        return any(atom.covers(v) for atom in self.atoms)

    def __or__(self, other: "SpectralSet") -> "SpectralSet":
        return union(self, other)

    def __add__(self, other: "SpectralSet") -> "SpectralSet":
        return minkowski_sum(self, other)


EMPTY = SpectralSet(())


def _atom_sort_key(atom: Atom):
    if isinstance(atom, Point):
        return (atom.value, 0, Fraction(0))
    return (atom.base, 1, atom.step)


def normalize(atoms: Iterable[Atom]) -> SpectralSet:
    """Canonical form of a collection of atoms.

    Merging rules, applied to a fixed point:

    - points with equal value merge, adding multiplicities (infinite absorbs);
    - progressions with equal base and step merge the same way;
    - any atom whose points all lie on a progression of infinite multiplicity
      is absorbed by it;
    - a point lying on a progression with the same finite multiplicity is
      absorbed by it;
    - a point sitting one step below a progression with the same multiplicity
      extends that progression downward.

    Absorption into a progression keeps the point set and the per-point
    finite/infinite class exact; nominal finite counts on progression-covered
    values are class-level only (see the module docstring).
    """
    work: list[Atom] = list(atoms)
    for atom in work:
        if not isinstance(atom, (Point, AP)):
            raise TypeError(f"not a spectral atom: {atom!r}")

    current = tuple(sorted(work, key=_atom_sort_key))
    while True:
        merged = _normalize_pass(current)
        merged = tuple(sorted(merged, key=_atom_sort_key))
        if merged == current:
            return SpectralSet(merged)
        current = merged


def _normalize_pass(work: tuple[Atom, ...]) -> list[Atom]:
    points: dict[Fraction, Mult] = {}
    aps: dict[tuple[Fraction, Fraction], Mult] = {}
    for atom in work:
        if isinstance(atom, Point):
            points[atom.value] = points.get(atom.value, 0) + atom.mult
        else:
            key = (atom.base, atom.step)
            aps[key] = aps.get(key, 0) + atom.mult

    ap_list = [AP(b, s, m) for (b, s), m in aps.items()]
    infinite_aps = [ap for ap in ap_list if is_infinite(ap.mult)]
    kept_aps: list[AP] = []
    for ap in ap_list:
        absorbed = any(
            other is not ap and other.contains_ap(ap) for other in infinite_aps
        )
        if not absorbed:
            kept_aps.append(ap)

    kept_points: list[Point] = []
    for value in sorted(points, reverse=True):
        pt = Point(value, points[value])
        dropped = False
        for idx, ap in enumerate(kept_aps):
            if ap.covers(pt.value):
                if is_infinite(ap.mult) or pt.mult == ap.mult:
                    dropped = True
                    break
            elif pt.value + ap.step == ap.base and pt.mult == ap.mult:
                kept_aps[idx] = AP(pt.value, ap.step, ap.mult)
                dropped = True
                break
        if not dropped:
            kept_points.append(pt)

    return [*kept_points, *kept_aps]


def union(a: SpectralSet, b: SpectralSet) -> SpectralSet:
    """Set union with pointwise multiplicity addition (infinite absorbs)."""
    return normalize(a.atoms + b.atoms)


def _union_all(parts: Iterable[SpectralSet]) -> SpectralSet:
    atoms: list[Atom] = []
    for part in parts:
        atoms.extend(part.atoms)
    return normalize(atoms)


def _representable(n: int, p: int, q: int) -> bool:
    return any((n - i * p) % q == 0 for i in range(n // p + 1))


def _atom_minkowski(x: Atom, y: Atom) -> list[Atom]:
    mult = INFINITE if is_infinite(x.mult) or is_infinite(y.mult) else x.mult * y.mult
    if isinstance(x, Point) and isinstance(y, Point):
        return [Point(x.value + y.value, mult)]
    if isinstance(x, Point):
        return [AP(x.value + y.base, y.step, mult)]
    if isinstance(y, Point):
        return [AP(x.base + y.value, x.step, mult)]
    g = _frac_gcd(x.step, y.step)
    p = x.step / g
    q = y.step / g
    assert p.denominator == 1 and q.denominator == 1
    p, q = p.numerator, q.numerator
    base = x.base + y.base
    if p == 1 or q == 1:
        return [AP(base, g, mult)]
    # Coprime steps p and q: the reachable n form the numerical semigroup
    # <p, q>, complete past the Frobenius number pq - p - q.  Each reachable n
    # at or below it has exactly one representation, so the point
    # multiplicities are exact there.
    frobenius = p * q - p - q
    atoms: list[Atom] = [
        Point(base + g * n, mult)
        for n in range(frobenius + 1)
        if _representable(n, p, q)
    ]
    atoms.append(AP(base + g * (frobenius + 1), g, mult))
    return atoms


def minkowski_sum(a: SpectralSet, b: SpectralSet) -> SpectralSet:
    """Exact Minkowski sum ``{x + y}``; empty if either operand is empty."""
    if a.is_empty() or b.is_empty():
        return EMPTY
    atoms: list[Atom] = []
    for x in a.atoms:
        for y in b.atoms:
            atoms.extend(_atom_minkowski(x, y))
    return normalize(atoms)


def essential_part(s: SpectralSet) -> SpectralSet:
    """Points of infinite multiplicity.

    Progression atoms diverge, so they contribute no finite accumulation
    points; only infinite-multiplicity annotations survive.
    """
    return normalize(atom for atom in s.atoms if is_infinite(atom.mult))


def multiplicity_at(s: SpectralSet, value: RationalLike) -> Mult:
    """Total multiplicity annotation at one value; 0 when the value is absent.

    Exact for values not covered by progression atoms; class-level otherwise.
    """
    v = as_rational(value)
    total: Mult = 0
    for atom in s.atoms:
        if atom.covers(v):
            total = INFINITE if is_infinite(atom.mult) else total + atom.mult
            if is_infinite(total):
                return INFINITE
    return total


def covered_by_progression(s: SpectralSet, value: RationalLike) -> bool:
    v = as_rational(value)
    return any(isinstance(atom, AP) and atom.covers(v) for atom in s.atoms)


def enumerate_below(s: SpectralSet, cutoff: RationalLike) -> list[tuple[Fraction, Mult]]:
    """All spectrum values strictly below ``cutoff`` with total multiplicities."""
    bound = as_rational(cutoff)
    acc: dict[Fraction, Mult] = {}
    for atom in s.atoms:
        if isinstance(atom, Point):
            if atom.value < bound:
                acc[atom.value] = acc.get(atom.value, 0) + atom.mult
        else:
            n = 0
            while atom.base + n * atom.step < bound:
                v = atom.base + n * atom.step
                acc[v] = acc.get(v, 0) + atom.mult
                n += 1
    return sorted(acc.items())


def minkowski_oracle_check(a: SpectralSet, b: SpectralSet, cutoff: RationalLike) -> bool:
    """Verify ``minkowski_sum`` against brute-force enumeration below ``cutoff``.

    Valid because all values are nonnegative: a sum below the cutoff only uses
    summands below the cutoff.  Values are compared exactly; multiplicities
    are compared as finite/infinite classes, and as exact counts when both
    inputs consist of points only.
    """
    bound = as_rational(cutoff)
    lhs = enumerate_below(minkowski_sum(a, b), bound)
    acc: dict[Fraction, Mult] = {}
    for va, ma in enumerate_below(a, bound):
        for vb, mb in enumerate_below(b, bound):
            v = va + vb
            if v < bound:
                m = INFINITE if is_infinite(ma) or is_infinite(mb) else ma * mb
                acc[v] = acc.get(v, 0) + m
    rhs = sorted(acc.items())
    if [v for v, _ in lhs] != [v for v, _ in rhs]:
        return False
    points_only = all(
        isinstance(atom, Point) for atom in (*a.atoms, *b.atoms)
    )
    for (_, ml), (_, mr) in zip(lhs, rhs):
        if is_infinite(ml) != is_infinite(mr):
            return False
        if points_only and ml != mr:
            return False
    return True


# ---------------------------------------------------------------------------
# Exact containment


def find_uncovered(a: SpectralSet, b: SpectralSet) -> Fraction | None:
    """A witness value in ``a`` that is not in ``b``, or ``None`` if a is a subset.

    Decides containment exactly: progression tails are reduced to congruence
    coverage, which is periodic, so one period past all thresholds settles the
    answer.
    """
    b_points = [t for t in b.atoms if isinstance(t, Point)]
    b_aps = [t for t in b.atoms if isinstance(t, AP)]
    for atom in a.atoms:
        if isinstance(atom, Point):
            if not b.contains(atom.value):
                return atom.value
            continue
        witness = _find_uncovered_ap(atom, b_points, b_aps)
        if witness is not None:
            return witness
    return None


def is_subset(a: SpectralSet, b: SpectralSet) -> bool:
    return find_uncovered(a, b) is None


def is_subset_of_zero(s: SpectralSet) -> bool:
    """True when the point set is contained in ``{0}`` (possibly empty)."""
    return all(isinstance(atom, Point) and atom.value == 0 for atom in s.atoms)


def _find_uncovered_ap(
    ap: AP, b_points: list[Point], b_aps: list[AP]
) -> Fraction | None:
    a0, s = ap.base, ap.step
    congruences: list[tuple[int, int, int]] = []  # (residue, modulus, n_min)
    for other in b_aps:
        den = math.lcm(
            a0.denominator, s.denominator, other.base.denominator, other.step.denominator
        )
        big_a0 = a0.numerator * (den // a0.denominator)
        big_s = s.numerator * (den // s.denominator)
        big_b0 = other.base.numerator * (den // other.base.denominator)
        big_t = other.step.numerator * (den // other.step.denominator)
        g = math.gcd(big_s, big_t)
        if (big_b0 - big_a0) % g:
            continue
        modulus = big_t // g
        reduced_s = (big_s // g) % modulus if modulus > 1 else 0
        rhs = ((big_b0 - big_a0) // g) % modulus if modulus > 1 else 0
        residue = (rhs * pow(reduced_s, -1, modulus)) % modulus if modulus > 1 else 0
        diff = (other.base - a0) / s
        n_min = 0 if diff <= 0 else math.ceil(diff)
        congruences.append((residue, modulus, n_min))

    def point_covered(v: Fraction) -> bool:
        return any(pt.value == v for pt in b_points)

    def congruence_covered(n: int) -> bool:
        return any(n >= n_min and (n - r) % m == 0 for (r, m, n_min) in congruences)

    if not congruences:
        # Only finitely many values can be covered by points.
        for n in range(len(b_points) + 1):
            v = a0 + n * s
            if not point_covered(v):
                return v
        return None  # pragma: no cover - pigeonhole guarantees a witness above

    period = math.lcm(*(m for _, m, _ in congruences))
    start = max([0, *(n_min for _, _, n_min in congruences)])
    for n in range(start):
        v = a0 + n * s
        if not (congruence_covered(n) or point_covered(v)):
            return v
    for r in range(start, start + period):
        if congruence_covered(r):
            continue
        # This residue class is never congruence-covered; points can only
        # cover finitely many of its members.
        for k in range(len(b_points) + 1):
            v = a0 + (r + k * period) * s
            if not point_covered(v):
                return v
    return None


# ---------------------------------------------------------------------------
# Operator spectra and the product formulas


@dataclass(frozen=True)
class OperatorSpectrum:
    """Spectrum and essential spectrum of one positive self-adjoint operator.

    When ``essential`` is omitted it is derived from the multiplicity
    annotations of ``spectrum``; passing it explicitly marks it as
    user-asserted (needed to model operators whose essential spectrum arises
    from accumulation, which the atom class cannot express).
    """

    spectrum: SpectralSet
    essential: SpectralSet | None = None
    essential_asserted: bool = True

    def __post_init__(self) -> None:
        if self.essential is None:
            object.__setattr__(self, "essential", essential_part(self.spectrum))
            object.__setattr__(self, "essential_asserted", False)
        else:
            witness = find_uncovered(self.essential, self.spectrum)
            if witness is not None:
                raise EssentialNotContainedError(
                    f"essential spectrum point {witness} does not belong to the spectrum"
                )

    def is_empty(self) -> bool:
        return self.spectrum.is_empty()


EMPTY_OPERATOR_SPECTRUM = OperatorSpectrum(EMPTY)


def product_spectrum(
    left: Mapping[int, OperatorSpectrum],
    right: Mapping[int, OperatorSpectrum],
    degree: int,
) -> OperatorSpectrum:
    """Spectrum and essential spectrum of the product Laplacian at ``degree``.

    The spectrum is the union over ``j + k = degree`` of the Minkowski sums of
    the factor spectra; the essential spectrum replaces one factor at a time
    by its essential part.  Degrees missing from a map are zero spaces and
    contribute empty sets.
    """
    spectrum_parts: list[SpectralSet] = []
    essential_parts: list[SpectralSet] = []
    for j in sorted(left):
        k = degree - j
        if k not in right:
            continue
        lsp, rsp = left[j], right[k]
        spectrum_parts.append(minkowski_sum(lsp.spectrum, rsp.spectrum))
        essential_parts.append(minkowski_sum(lsp.essential, rsp.spectrum))
        essential_parts.append(minkowski_sum(lsp.spectrum, rsp.essential))
    spectrum = _union_all(spectrum_parts)
    essential = _union_all(essential_parts)
    return OperatorSpectrum(spectrum, essential)


def nondegenerate_spectra_check(
    spectra: Mapping[int, OperatorSpectrum], support: Iterable[int]
) -> bool:
    """True when every supported degree has a spectrum that is neither empty nor {0}."""
    for degree in support:
        op = spectra.get(degree)
        if op is None or op.spectrum.is_empty():
            return False
        atoms = op.spectrum.atoms
        if len(atoms) == 1 and isinstance(atoms[0], Point) and atoms[0].value == 0:
            return False
    return True


# ---------------------------------------------------------------------------
# Compactness verdicts


class Verdict(str, Enum):
    COMPACT = "compact"
    NONCOMPACT = "non-compact"
    UNDECIDABLE = "undecidable"


@dataclass(frozen=True)
class CompactnessReport:
    """Structured compactness verdict with the rule that decided it."""

    verdict: Verdict
    fired_rule: str
    witnesses: tuple
    essential_spectrum: SpectralSet
    trace: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.verdict is Verdict.NONCOMPACT and not self.witnesses:
            raise ValueError("a non-compact verdict requires witnesses")
        if self.verdict is Verdict.COMPACT and not is_subset_of_zero(
            self.essential_spectrum
        ):
            raise ValueError("a compact verdict requires essential spectrum within {0}")


@dataclass(frozen=True)
class SpectralComplexModel:
    """Per-degree operator spectra of one Hilbert complex, with attestations.

    ``support`` lists the degrees with a nonzero space; it defaults to the
    degrees present in ``spectra``.  ``closed_range`` attests that all
    differentials have closed range, which the compactness criteria require.
    """

    spectra: Mapping[int, OperatorSpectrum]
    support: frozenset[int] = None  # type: ignore[assignment]
    nondegenerate: bool = False
    closed_range: bool = False

    def __post_init__(self) -> None:
        spectra = dict(self.spectra)
        object.__setattr__(self, "spectra", spectra)
        if self.support is None:
            object.__setattr__(
                self,
                "support",
                frozenset(d for d, op in spectra.items() if not op.is_empty()),
            )
        else:
            object.__setattr__(self, "support", frozenset(self.support))
        for degree in self.support:
            op = spectra.get(degree)
            if op is None or op.is_empty():
                raise ValueError(
                    f"degree {degree} is in the support but has an empty spectrum"
                )
        for degree, op in spectra.items():
            if degree not in self.support and not op.is_empty():
                raise ValueError(
                    f"degree {degree} has a nonempty spectrum but is not in the support"
                )


def compactness_verdict(
    left: SpectralComplexModel, right: SpectralComplexModel, degree: int
) -> CompactnessReport:
    """Decide compactness of the inverse-Laplacian of the product at ``degree``.

    With nondegeneracy asserted on both factors, compactness holds exactly
    when every relevant factor essential spectrum is empty.  Without it, the
    criterion is that each cross sum of an essential spectrum with the other
    factor's spectrum stays within ``{0}``.
    """
    if not (left.closed_range and right.closed_range):
        raise MissingAttestationError(
            "compactness criteria require closed-range attestations on both factors"
        )
    pairs = [
        (j, degree - j) for j in sorted(left.support) if (degree - j) in right.support
    ]
    product = product_spectrum(left.spectra, right.spectra, degree)

    if left.nondegenerate and right.nondegenerate:
        witnesses = tuple(
            (j, k)
            for (j, k) in pairs
            if not (
                left.spectra[j].essential.is_empty()
                and right.spectra[k].essential.is_empty()
            )
        )
        if witnesses:
            return CompactnessReport(
                Verdict.NONCOMPACT,
                "factor-essential-spectrum-nonempty",
                witnesses,
                product.essential,
            )
        return CompactnessReport(
            Verdict.COMPACT, "factor-essential-spectra-empty", (), product.essential
        )

    witnesses = tuple(
        (j, k)
        for (j, k) in pairs
        if not (
            is_subset_of_zero(
                minkowski_sum(left.spectra[j].essential, right.spectra[k].spectrum)
            )
            and is_subset_of_zero(
                minkowski_sum(left.spectra[j].spectrum, right.spectra[k].essential)
            )
        )
    )
    if witnesses:
        return CompactnessReport(
            Verdict.NONCOMPACT,
            "essential-cross-sum-exceeds-zero",
            witnesses,
            product.essential,
        )
    return CompactnessReport(
        Verdict.COMPACT, "essential-cross-sums-within-zero", (), product.essential
    )
