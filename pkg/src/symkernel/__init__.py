"""Reproducing kernels of weighted Bergman and Hardy spaces on the symmetrized polydisc."""
from .errors import (
    ConvergenceError,
    DegeneratePointError,
    DomainError,
    InvalidDimensionError,
    InvalidInputError,
    InvalidWeightError,
    SingularEvaluationError,
    SymKernelError,
)
from .kernels import (
    KernelResult,
    bergman_kernel_polydisc,
    bergman_kernel_symmetrized,
    g2_bergman_explicit,
    hardy_kernel_anti,
    js_norm_sq,
    kernel_anti_det,
    kernel_anti_series,
    kernel_sgn,
    project_sign,
    szego_kernel_symmetrized,
)
from .quadrature import (
    GramReport,
    QuadratureRule,
    build_rule,
    gram_matrix,
    inner_product_analytic,
    inner_product_numeric,
    monomial_norm_sq,
    monte_carlo_inner_product,
)
from .symcore import (
    Partition,
    SparsePolynomial,
    StrictPartition,
    SymmetrizedPoint,
    antisymmetrized_monomial,
    basis_norm_constant,
    complete_homogeneous,
    delta,
    elementary_symmetric,
    enumerate_partitions,
    orbit_disjointness,
    pochhammer,
    schur,
    schur_bialternant,
    symmetrize,
    vandermonde,
)

__version__ = "0.1.0"
