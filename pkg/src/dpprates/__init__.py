"""Numerical toolkit for unitary-ensemble determinantal point processes.

Scaled Christoffel-Darboux kernels and their sine/Airy/Bessel limits,
Nystrom discretization with Schatten norms and Fredholm determinants,
the operator factorizations behind the convergence proofs, exact point-
count laws with W1 distances, and a harness that measures how fast the
finite-N processes approach their limits.
"""

__version__ = "0.1.0"

from .kernels import (  # noqa: F401
    GUE,
    JUE,
    LUE,
    EnsembleParams,
    KernelSpec,
    SoftEdgeScaling,
    bulk_spec,
    finite_kernel,
    hard_spec,
    limit_kernel,
    limit_spec,
    soft_scaling,
    soft_spec,
)
from .nystrom import (  # noqa: F401
    DiscreteOperator,
    QuadratureGrid,
    default_node_count,
    discretize,
    fredholm_det,
    gauss_legendre,
    schatten_norm,
    trace_norm_diff,
)
from .pointcount import (  # noqa: F401
    CountSample,
    PointCountPMF,
    ValidityError,
    count_pmf,
    coupling_bound,
    gap_cdf,
    restricted_spectrum,
    sample_counts,
    tv_counts,
    w1_counts,
)
from .specfun import (  # noqa: F401
    DomainError,
    FunctionValue,
    airy,
    bessel_j,
    hermite_psi,
    jacobi,
    laguerre,
)
from .factor import FACTOR_KINDS, FactorSet, build_factors, verify_factorization  # noqa: F401
from .harness import (  # noqa: F401
    ExperimentConfig,
    RateFit,
    RateSeries,
    edge_cdf_compare,
    fit_loglog,
    run_roc,
)
