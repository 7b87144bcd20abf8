"""hcspec: spectral toolkit for finite Hilbert complexes and their products.

Layers, bottom up:

- :mod:`hcspec.numerics`: dense complex-matrix kernels (Hermitian eig,
  pseudo-inverse, Kronecker, projections, rank).
- :mod:`hcspec.complexes`: finite Hilbert complexes, Laplacians, Hodge
  splitting, solution operators, operator identities.
- :mod:`hcspec.tensorprod`: tensor products of complexes, the blockwise
  product Laplacian, Kuenneth counts, spectrum pairing checks.
- :mod:`hcspec.spectra`: exact symbolic spectral sets (points and arithmetic
  progressions over the rationals), Minkowski sums, essential parts, product
  formulas and compactness verdicts.
- :mod:`hcspec.jointspec`: joint spectra of commuting normal pairs and the
  sum-operator spectrum checks.
- :mod:`hcspec.dbar`: compactness of the inverse complex Laplacian on
  products of Hermitian factors, with a built-in model catalogue.
- :mod:`hcspec.cli`: the ``hcspec`` command.
"""

from .complexes import (
    FiniteComplex,
    HodgeSplit,
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
from .dbar import (
    DbarFactorModel,
    builtin_models,
    neumann_compactness,
    product_box_spectrum,
    riemann_surface_product_report,
)
from .errors import ToolkitError
from .jointspec import (
    CommutingPair,
    JointSpectrumPoints,
    check_pair,
    joint_spectrum,
    spectral_mapping,
    sum_operator_check,
    tensor_pair_spectrum,
)
from .numerics import (
    EigenDecomposition,
    Tolerance,
    hermitian_eig,
    kronecker,
    numeric_rank,
    pseudo_inverse,
    range_projection,
)
from .spectra import (
    AP,
    EMPTY,
    INFINITE,
    CompactnessReport,
    OperatorSpectrum,
    Point,
    SpectralComplexModel,
    SpectralSet,
    Verdict,
    compactness_verdict,
    enumerate_below,
    essential_part,
    is_subset,
    minkowski_oracle_check,
    minkowski_sum,
    nondegenerate_spectra_check,
    normalize,
    product_spectrum,
    union,
)
from .tensorprod import (
    ProductBlockIndex,
    kuenneth_check,
    product_laplacian_blocks,
    tensor_complex,
    verify_product_spectrum,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
