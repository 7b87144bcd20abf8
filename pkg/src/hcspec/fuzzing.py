"""Seeded generators and property suites shared by the tests and the CLI.

All generators are deterministic functions of a ``random.Random`` instance,
so a suite run is reproducible from a single integer seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from . import complexes, tensorprod
from .dbar import DbarFactorModel, riemann_surface_product_report
from .spectra import (
    AP,
    INFINITE,
    OperatorSpectrum,
    Point,
    SpectralComplexModel,
    SpectralSet,
    Verdict,
    compactness_verdict,
    enumerate_below,
    find_uncovered,
    is_infinite,
    is_subset_of_zero,
    minkowski_oracle_check,
    minkowski_sum,
    multiplicity_at,
    normalize,
    product_spectrum,
)


def random_rational(rnd: random.Random, max_numerator: int = 10) -> Fraction:
    return Fraction(rnd.randrange(0, max_numerator + 1), rnd.choice((1, 1, 2, 3)))


def random_step(rnd: random.Random) -> Fraction:
    return Fraction(rnd.randrange(1, 7), rnd.choice((1, 1, 2)))


def random_mult(rnd: random.Random, infinite_chance: float = 0.25):
    if rnd.random() < infinite_chance:
        return INFINITE
    return rnd.randint(1, 3)


def random_atom(rnd: random.Random, infinite_chance: float = 0.25):
    if rnd.random() < 0.5:
        return Point(random_rational(rnd), random_mult(rnd, infinite_chance))
    return AP(random_rational(rnd), random_step(rnd), random_mult(rnd, infinite_chance))


def random_spectral_set(
    rnd: random.Random,
    max_atoms: int = 3,
    allow_empty: bool = True,
    infinite_chance: float = 0.25,
) -> SpectralSet:
    count = rnd.randint(0 if allow_empty else 1, max_atoms)
    return normalize(random_atom(rnd, infinite_chance) for _ in range(count))


def random_operator_spectrum(
    rnd: random.Random,
    nondegenerate: bool = False,
    infinite_chance: float = 0.25,
) -> OperatorSpectrum:
    spectrum = random_spectral_set(
        rnd, allow_empty=not nondegenerate, infinite_chance=infinite_chance
    )
    if nondegenerate:
        # Guarantee a value other than 0.
        spectrum = normalize(
            (*spectrum.atoms, AP(random_rational(rnd), random_step(rnd), random_mult(rnd, infinite_chance)))
        )
    if rnd.random() < 0.25 and not spectrum.is_empty():
        asserted = normalize(
            atom for atom in spectrum.atoms if rnd.random() < 0.4
        )
        return OperatorSpectrum(spectrum, asserted)
    return OperatorSpectrum(spectrum)


def random_spectral_model(
    rnd: random.Random, max_degree: int = 2, infinite_chance: float = 0.25
) -> SpectralComplexModel:
    """Nondegenerate per-degree spectra over a small contiguous support."""
    top = rnd.randint(0, max_degree)
    spectra = {
        degree: random_operator_spectrum(rnd, nondegenerate=True, infinite_chance=infinite_chance)
        for degree in range(top + 1)
    }
    return SpectralComplexModel(spectra, nondegenerate=True, closed_range=True)


def random_positive_spectral_set(
    rnd: random.Random, max_atoms: int = 2, infinite_chance: float = 0.2
) -> SpectralSet:
    """Nonempty set of strictly positive values (no kernel contamination)."""
    atoms = []
    for _ in range(rnd.randint(1, max_atoms)):
        value = Fraction(rnd.randrange(1, 11), rnd.choice((1, 1, 2)))
        if rnd.random() < 0.5:
            atoms.append(Point(value, random_mult(rnd, infinite_chance)))
        else:
            atoms.append(AP(value, random_step(rnd), random_mult(rnd, infinite_chance)))
    return normalize(atoms)


def random_factor_model(
    rnd: random.Random, name: str, infinite_chance: float = 0.2
) -> DbarFactorModel:
    """A fully specified one-dimensional factor with consistent spectral data.

    For a genuine two-term complex the function and form Laplacians share
    their nonzero spectrum, so both bidegrees get the same positive part and
    only the kernel multiplicities differ.
    """
    positive = random_positive_spectral_set(rnd, infinite_chance=infinite_chance)

    def with_kernel() -> SpectralSet:
        roll = rnd.random()
        if roll < 0.4:
            return positive
        if roll < 0.8:
            return normalize((*positive.atoms, Point(0, rnd.randint(1, 3))))
        return normalize((*positive.atoms, Point(0, INFINITE)))

    functions = OperatorSpectrum(with_kernel())
    forms = OperatorSpectrum(with_kernel())
    entries = {
        (0, 0): functions,
        (0, 1): forms,
        (1, 0): functions,
        (1, 1): forms,
    }
    kernel = multiplicity_at(functions.spectrum, 0)
    return DbarFactorModel(
        name=name,
        complex_dimension=1,
        box_spectrum=entries,
        closed_range=True,
        bergman_dim=kernel,
    )


def sets_semantically_equal(a: SpectralSet, b: SpectralSet, cutoff: Fraction) -> bool:
    """Same point set (exactly, both directions) and same finite/infinite
    classes below the cutoff.

    Normalized forms of equal sets need not coincide structurally: a union of
    finite-multiplicity progressions can cover one point set in several
    incomparable ways.  Mutual containment plus class agreement is the honest
    equality for such sets.
    """
    if find_uncovered(a, b) is not None or find_uncovered(b, a) is not None:
        return False
    ea = enumerate_below(a, cutoff)
    eb = enumerate_below(b, cutoff)
    return [(v, is_infinite(m)) for v, m in ea] == [(v, is_infinite(m)) for v, m in eb]


# ---------------------------------------------------------------------------
# Property suites


@dataclass(frozen=True)
class SuiteResult:
    suite: str
    cases: int
    failures: tuple[str, ...]

    @property
    def passed(self) -> bool:
        return not self.failures


def run_complex_suite(seed: int, cases: int, bound: float = 1e-8) -> SuiteResult:
    """Cochain validity, Hodge projector algebra, and operator identities."""
    import numpy as np

    rnd = random.Random(seed)
    failures = []
    for case in range(cases):
        dims = [rnd.randint(0, 6) for _ in range(rnd.randint(2, 4))]
        complex_ = complexes.random_complex(dims, seed=rnd.randrange(2**32))
        if not complexes.validate(complex_).passed:
            failures.append(f"case {case}: cochain validation failed for dims {dims}")
            continue
        for degree in complex_.degrees:
            report = complexes.check_identities(complex_, degree)
            if any(r > bound for r in report.residuals.values()):
                failures.append(
                    f"case {case}: identity residuals {report.residuals} at degree {degree}"
                )
            split = complexes.hodge(complex_, degree)
            n = complex_.dim(degree)
            if n == 0:
                continue
            total = split.p_harmonic + split.p_range_d + split.p_range_dstar
            hodge_residual = max(
                float(np.max(np.abs(total - np.eye(n)))),
                float(np.max(np.abs(split.p_harmonic @ split.p_range_d))),
                float(np.max(np.abs(split.p_harmonic @ split.p_range_dstar))),
                float(np.max(np.abs(split.p_range_d @ split.p_range_dstar))),
            )
            if hodge_residual > bound:
                failures.append(
                    f"case {case}: Hodge projector residual {hodge_residual:.2e} "
                    f"at degree {degree}"
                )
    return SuiteResult("complexes", cases, tuple(failures))


def run_tensor_suite(seed: int, cases: int) -> SuiteResult:
    """Product spectrum pairing and Kuenneth convolution on random pairs."""
    rnd = random.Random(seed)
    failures = []
    for case in range(cases):
        dims_a = [rnd.randint(0, 4) for _ in range(rnd.randint(1, 3))]
        dims_b = [rnd.randint(0, 4) for _ in range(rnd.randint(1, 3))]
        a = complexes.random_complex(dims_a, seed=rnd.randrange(2**32))
        b = complexes.random_complex(dims_b, seed=rnd.randrange(2**32))
        product, _ = tensorprod.tensor_complex(a, b)
        for degree in product.degrees:
            match = tensorprod.verify_product_spectrum(a, b, degree)
            if not match.passed:
                failures.append(
                    f"case {case}: spectrum gap {match.max_gap:.2e} at degree {degree}"
                )
        kuenneth = tensorprod.kuenneth_check(a, b)
        if not kuenneth.passed:
            failures.append(f"case {case}: Kuenneth mismatch {dict(kuenneth.pairs)}")
    return SuiteResult("tensor", cases, tuple(failures))


def run_spectra_suite(seed: int, cases: int, cutoff: Fraction = Fraction(100)) -> SuiteResult:
    """Minkowski sums against the enumeration oracle, plus algebra laws."""
    rnd = random.Random(seed)
    failures = []
    for case in range(cases):
        a = random_spectral_set(rnd)
        b = random_spectral_set(rnd)
        if not minkowski_oracle_check(a, b, cutoff):
            failures.append(f"case {case}: oracle mismatch for {a} + {b}")
        c = random_spectral_set(rnd)
        lhs = minkowski_sum(minkowski_sum(a, b), c)
        rhs = minkowski_sum(a, minkowski_sum(b, c))
        if not sets_semantically_equal(lhs, rhs, cutoff):
            failures.append(f"case {case}: associativity broke for {a}, {b}, {c}")
        if minkowski_sum(a, b) != minkowski_sum(b, a):
            failures.append(f"case {case}: commutativity broke for {a}, {b}")
    return SuiteResult("spectra", cases, tuple(failures))


def run_verdict_suite(seed: int, cases: int, cutoff: Fraction = Fraction(100)) -> SuiteResult:
    """Containment of essential spectra and compactness criterion equivalences."""
    rnd = random.Random(seed)
    failures = []
    for case in range(cases):
        left = random_spectral_model(rnd)
        right = random_spectral_model(rnd)
        degree = rnd.randint(0, 4)
        product = product_spectrum(left.spectra, right.spectra, degree)
        for value, _ in enumerate_below(product.essential, cutoff):
            if not product.spectrum.contains(value):
                failures.append(f"case {case}: essential value {value} not in spectrum")
                break
        pairs = [
            (j, degree - j)
            for j in sorted(left.support)
            if (degree - j) in right.support
        ]
        by_cross_sums = all(
            is_subset_of_zero(
                minkowski_sum(left.spectra[j].essential, right.spectra[k].spectrum)
            )
            and is_subset_of_zero(
                minkowski_sum(left.spectra[j].spectrum, right.spectra[k].essential)
            )
            for (j, k) in pairs
        )
        by_factor_essentials = all(
            left.spectra[j].essential.is_empty() and right.spectra[k].essential.is_empty()
            for (j, k) in pairs
        )
        by_product_essential = product.essential.is_empty()
        verdict = compactness_verdict(left, right, degree)
        agreed = (
            by_cross_sums
            == by_factor_essentials
            == by_product_essential
            == (verdict.verdict is Verdict.COMPACT)
        )
        if not agreed:
            failures.append(
                f"case {case}: criteria disagree "
                f"(cross-sums {by_cross_sums}, factor essentials {by_factor_essentials}, "
                f"product essential {by_product_essential}, verdict {verdict.verdict})"
            )
    return SuiteResult("verdicts", cases, tuple(failures))


def run_surface_product_suite(seed: int, cases: int) -> SuiteResult:
    """Monotonicity and shortcut logic for products of one-dimensional factors."""
    rnd = random.Random(seed)
    failures = []
    for case in range(cases):
        n = rnd.randint(2, 4)
        factors = [random_factor_model(rnd, f"factor-{case}-{j}") for j in range(n)]
        verdicts = {
            q: riemann_surface_product_report(factors, q).verdict for q in range(n + 1)
        }
        if any(v is Verdict.UNDECIDABLE for v in verdicts.values()):
            failures.append(f"case {case}: unexpected undecidable verdict")
            continue
        noncompact = {q for q, v in verdicts.items() if v is Verdict.NONCOMPACT}
        if 0 in noncompact and not set(range(n)).issubset(noncompact):
            failures.append(f"case {case}: degree-0 non-compactness did not propagate")
        if n in noncompact and not set(range(1, n + 1)).issubset(noncompact):
            failures.append(f"case {case}: top-degree non-compactness did not propagate")
        middle = set(range(1, n)) & noncompact
        if middle and not set(range(1, n)).issubset(noncompact):
            failures.append(f"case {case}: middle-degree non-compactness did not spread")
        mid_compact = (0 not in noncompact) and (n not in noncompact)
        for q in range(1, n):
            if (verdicts[q] is Verdict.COMPACT) != mid_compact:
                failures.append(
                    f"case {case}: middle degree {q} disagrees with the end degrees"
                )
        if any(
            f.bergman_dim is not None and is_infinite(f.bergman_dim) for f in factors
        ) and not set(range(n)).issubset(noncompact):
            failures.append(f"case {case}: infinite Bergman space did not force non-compactness")
        solution_noncompact = any(
            not is_subset_of_zero(f.box_spectrum[(0, 0)].essential)
            or not is_subset_of_zero(f.box_spectrum[(0, 1)].essential)
            for f in factors
        )
        if solution_noncompact and noncompact != set(range(n + 1)):
            failures.append(
                f"case {case}: non-compact factor solution operator did not spread to all degrees"
            )
    return SuiteResult("surface-products", cases, tuple(failures))


def run_joint_suite(seed: int, cases: int, gap: float = 1e-7) -> SuiteResult:
    """Joint spectra of tensored pairs and the sum-operator identity."""
    import numpy as np

    from .jointspec import (
        pairing_gap,
        spectral_mapping,
        sum_operator_check,
        tensor_pair_spectrum,
    )

    rng = np.random.default_rng(seed)

    def random_normal_matrix(n: int) -> np.ndarray:
        q, _ = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
        d = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        return q @ np.diag(d) @ q.conj().T

    def random_psd(n: int) -> np.ndarray:
        b = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        return b @ b.conj().T / n

    failures = []
    for case in range(cases):
        nt = int(rng.integers(1, 5))
        ns = int(rng.integers(1, 5))
        t = random_normal_matrix(nt)
        s = random_normal_matrix(ns)
        points = tensor_pair_spectrum(t, s)
        eig_t = sorted(np.linalg.eigvals(t), key=lambda z: (z.real, z.imag))
        eig_s = sorted(np.linalg.eigvals(s), key=lambda z: (z.real, z.imag))
        cartesian = [(complex(a), complex(b)) for a in eig_t for b in eig_s]
        cart_gap = pairing_gap(points.pairs, cartesian)
        if cart_gap > gap:
            failures.append(f"case {case}: Cartesian pairing gap {cart_gap:.2e}")

        nt = int(rng.integers(1, 9))
        ns = int(rng.integers(1, 9))
        t = random_psd(nt)
        s = random_psd(ns)
        report = sum_operator_check(t, s)
        if not report.passed:
            failures.append(
                f"case {case}: sum-operator gaps {report.max_gap:.2e} / "
                f"{report.symbolic_max_gap:.2e}"
            )
        mapped = spectral_mapping(
            tensor_pair_spectrum(t, s), lambda lam, mu: lam + mu
        )
        assembled = [complex(v) for v in report.eigenvalues]
        map_gap = pairing_gap(
            [(z, 0j) for z in mapped], [(z, 0j) for z in assembled]
        )
        if map_gap > gap:
            failures.append(f"case {case}: mapping vs assembly gap {map_gap:.2e}")
    return SuiteResult("joint", cases, tuple(failures))


SUITES = {
    "finite-complex": (run_complex_suite,),
    "finite-pair": (run_tensor_suite, run_joint_suite),
    "spectral-model": (run_spectra_suite, run_verdict_suite),
    "dbar-factors": (run_surface_product_suite,),
}

_CUTOFF_AWARE = (run_spectra_suite, run_verdict_suite)


def run_kind_suites(
    kind: str, seed: int, cases: int, cutoff: Fraction | None = None
) -> list[SuiteResult]:
    """All property suites registered for one scenario kind."""
    results = []
    for suite in SUITES[kind]:
        if cutoff is not None and suite in _CUTOFF_AWARE:
            results.append(suite(seed, cases, cutoff))
        else:
            results.append(suite(seed, cases))
    return results
