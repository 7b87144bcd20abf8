import math

import numpy as np
import pytest

from hcspec.complexes import (
    DegreeOutOfRangeError,
    FiniteComplex,
    InconsistentRankError,
    ShapeMismatchError,
    basic_estimate_constant,
    check_identities,
    cohomology_dim,
    hodge,
    is_nondegenerate,
    laplacian,
    laplacian_inverse,
    random_complex,
    solution_operator,
    spectrum_multiset,
    validate,
)
from hcspec.numerics import Tolerance, max_abs


def chain(d=1.0):
    """0 -> C -> C -> 0 with the single differential [d]."""
    return FiniteComplex(0, (1, 1), {0: [[d]]})


def test_shape_validation():
    with pytest.raises(ShapeMismatchError):
        FiniteComplex(0, (1, 1), {0: [[1.0, 2.0]]})
    with pytest.raises(ShapeMismatchError):
        FiniteComplex(0, (-1,))
    with pytest.raises(ShapeMismatchError):
        FiniteComplex(0, ())


def test_validate_zero_differentials_pass():
    c = FiniteComplex(0, (2, 3))
    report = validate(c)
    assert report.passed and all(r == 0.0 for r in report.residuals.values())


def test_validate_single_differential_passes():
    assert validate(chain()).passed


def test_validate_flags_nonzero_square():
    c = FiniteComplex(0, (2, 2, 2), {0: np.eye(2), 1: np.eye(2)})
    report = validate(c)
    assert not report.passed and report.residuals[0] == 1.0


def test_random_complex_is_deterministic_and_valid():
    a = random_complex([3, 4, 2], seed=5)
    b = random_complex([3, 4, 2], seed=5)
    assert validate(a).passed
    for degree in a.differentials:
        assert np.array_equal(a.differentials[degree], b.differentials[degree])
    c = random_complex([3, 4, 2], seed=6)
    assert any(
        not np.array_equal(a.differentials[d], c.differentials[d])
        for d in a.differentials
    )


def test_random_complex_degenerate_dims():
    zero = random_complex([0], seed=1)
    assert validate(zero).passed and zero.differentials == {}
    assert validate(random_complex([1, 1], seed=2)).passed
    pinched = random_complex([2, 0, 3], seed=3)
    assert validate(pinched).passed and pinched.differentials == {}


def test_laplacian_chain():
    c = chain()
    assert np.allclose(laplacian(c, 0), [[1.0]])
    assert np.allclose(laplacian(c, 1), [[1.0]])
    assert np.allclose(laplacian(chain(2.0), 0), [[4.0]])


def test_laplacian_zero_complex():
    c = FiniteComplex(0, (3,))
    assert max_abs(laplacian(c, 0)) == 0.0
    with pytest.raises(DegreeOutOfRangeError):
        laplacian(c, 1)


def test_hodge_zero_differentials():
    c = FiniteComplex(0, (3,))
    split = hodge(c, 0)
    assert np.allclose(split.p_harmonic, np.eye(3))
    assert max_abs(split.p_range_d) == 0.0
    assert max_abs(split.p_range_dstar) == 0.0
    assert split.harmonic_dim == 3


def test_hodge_invertible_laplacian():
    split = hodge(chain(), 0)
    assert split.harmonic_dim == 0
    assert np.allclose(split.p_range_dstar, [[1.0]])
    assert max_abs(split.p_harmonic) <= 1e-12


def test_hodge_projectors_sum_to_identity_on_random_complexes():
    for seed in range(5):
        c = random_complex([3, 4, 3], seed=seed)
        for degree in c.degrees:
            split = hodge(c, degree)
            n = c.dim(degree)
            total = split.p_harmonic + split.p_range_d + split.p_range_dstar
            assert max_abs(total - np.eye(n)) <= 1e-8


def test_cohomology_dims():
    c = FiniteComplex(0, (1, 1))
    assert cohomology_dim(c, 0) == 1 and cohomology_dim(c, 1) == 1
    assert cohomology_dim(chain(), 0) == 0 and cohomology_dim(chain(), 1) == 0
    middle = FiniteComplex(0, (1, 2, 1), {0: [[1.0], [0.0]], 1: [[0.0, 1.0]]})
    assert validate(middle).passed
    assert cohomology_dim(middle, 1) == 0


def test_cohomology_cross_check_flags_bad_thresholds():
    # a rank threshold wedged between a singular value and its square makes
    # the kernel count and the rank-nullity count disagree
    c = FiniteComplex(0, (1, 1), {0: [[1e-4]]})
    bad = Tolerance(rank_threshold=1e-6)
    with pytest.raises(InconsistentRankError):
        cohomology_dim(c, 0, bad)


def test_solution_operator_examples():
    assert np.allclose(solution_operator(chain(2.0), 1), [[0.5]])
    c = FiniteComplex(0, (2, 2))
    assert max_abs(solution_operator(c, 1)) == 0.0
    r = random_complex([4, 3, 2], seed=11)
    for degree in (1, 2):
        d = r.differential(degree - 1)
        s = solution_operator(r, degree)
        assert max_abs(d @ s @ d - d) <= 1e-8


def test_laplacian_inverse_examples():
    assert np.allclose(laplacian_inverse(chain(2.0), 0), [[0.25]])
    zero = FiniteComplex(0, (2,))
    assert max_abs(laplacian_inverse(zero, 0)) == 0.0
    c = FiniteComplex(0, (1, 2), {0: [[0.0], [np.sqrt(2.0)]]})
    n = laplacian_inverse(c, 1)
    assert np.allclose(n, np.diag([0.0, 0.5]), atol=1e-12)
    # N * Delta = identity minus harmonic projection
    split = hodge(c, 1)
    assert max_abs(n @ laplacian(c, 1) - (np.eye(2) - split.p_harmonic)) <= 1e-10


def test_identities_zero_and_scalar_chain():
    zero = FiniteComplex(0, (2, 2))
    for degree in (0, 1):
        report = check_identities(zero, degree)
        assert report.passed and all(r == 0.0 for r in report.residuals.values())
    for degree in (0, 1):
        report = check_identities(chain(), degree)
        assert all(r <= 1e-12 for r in report.residuals.values())


def test_identities_on_random_complexes():
    for seed in (0, 1, 2):
        c = random_complex([3, 5, 4, 2], seed=seed)
        for degree in c.degrees:
            report = check_identities(c, degree)
            assert report.passed, (seed, degree, report.residuals)


def test_basic_estimate_constant():
    c = FiniteComplex(0, (1, 2), {0: [[0.0], [np.sqrt(2.0)]]})
    assert abs(basic_estimate_constant(c, 1) - 0.5) <= 1e-12
    ident = chain()
    assert abs(basic_estimate_constant(ident, 0) - 1.0) <= 1e-12
    assert basic_estimate_constant(FiniteComplex(0, (2,)), 0) == math.inf
    assert basic_estimate_constant(FiniteComplex(0, (0,)), 0) == 0.0


def test_basic_estimate_bounds_sampled_vectors():
    rng = np.random.default_rng(17)
    c = random_complex([3, 4, 2], seed=23)
    for degree in c.degrees:
        constant = basic_estimate_constant(c, degree)
        if not np.isfinite(constant) or constant == 0.0:
            continue
        split = hodge(c, degree)
        n = c.dim(degree)
        d_here = c.differential(degree)
        d_prev = c.differential(degree - 1)
        for _ in range(10):
            x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            x = x - split.p_harmonic @ x
            lhs = float(np.linalg.norm(x) ** 2)
            rhs = float(
                np.linalg.norm(d_here @ x) ** 2 + np.linalg.norm(d_prev.conj().T @ x) ** 2
            )
            assert lhs <= constant * rhs * (1 + 1e-6)


def test_spectrum_multiset():
    assert spectrum_multiset(FiniteComplex(0, (2,)), 0) == [0.0, 0.0]
    assert np.allclose(spectrum_multiset(chain(), 0), [1.0])
    assert np.allclose(spectrum_multiset(chain(2.0), 0), [4.0])
    assert spectrum_multiset(chain(), 5) == []


def test_is_nondegenerate():
    assert is_nondegenerate(chain()).nondegenerate
    assert not is_nondegenerate(FiniteComplex(0, (1,))).nondegenerate
    zero_map = FiniteComplex(0, (1, 1), {0: [[0.0]]})
    assert not is_nondegenerate(zero_map).nondegenerate


def test_nondegenerate_spectra_exceed_zero():
    # a nondegenerate complex has a nonzero Laplacian eigenvalue at every
    # supported degree
    for seed in range(5):
        c = random_complex([3, 4, 2], seed=seed)
        assert is_nondegenerate(c).nondegenerate
        for degree in c.degrees:
            if c.dim(degree) == 0:
                continue
            values = spectrum_multiset(c, degree)
            assert values and max(values) > 1e-8
