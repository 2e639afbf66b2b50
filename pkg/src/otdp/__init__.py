"""Optimal transport between a product distribution and a two-point target.

Exact rational solvers (dynamic programming over the loss grid and a
brute-force enumeration oracle), a lattice-rounding approximation scheme, and
a knapsack counting reduction driven by the transport oracle.
"""

from .approx import RoundingReport, error_bound, ot_approx, round_to_lattice
from .brute_oracle import (
    Atom,
    enumerate_atoms,
    epsilon_bar,
    min_of_wasserstein_over_t,
    ot_closed_form,
)
from .dp_solver import (
    LossTable,
    OtCurve,
    PlanDescriptor,
    convolve_losses,
    critical_index,
    loss_table,
    ot_exact,
    plan_descriptor,
    plan_query,
    scaled_cvar,
)
from .errors import (
    BadProbabilitiesError,
    BadRationalError,
    BadTError,
    BadToleranceError,
    CountMismatchError,
    DimensionMismatchError,
    DuplicateSupportError,
    EmptyInputError,
    GridTooLargeError,
    NotAnAtomError,
    OddPExactError,
    OtdpError,
    TooManyAtomsError,
    ZeroWeightsError,
)
from .grid import GriddedPmf, RegularGrid1D, detect_spanned_grid, minkowski_grid
from .knapsack import (
    CountResult,
    KnapsackInstance,
    count_dp,
    count_via_ot,
    parity_normalize,
    reduction_target,
    slope,
    with_adversarial_noise,
)
from .model import (
    Marginal,
    OtValue,
    ProductDistribution,
    TwoPointTarget,
    compute_U,
    format_rational,
    parse_rational,
    validate_instance,
)

__version__ = "0.1.0"

__all__ = [
    "Atom",
    "BadProbabilitiesError",
    "BadRationalError",
    "BadTError",
    "BadToleranceError",
    "CountMismatchError",
    "CountResult",
    "DimensionMismatchError",
    "DuplicateSupportError",
    "EmptyInputError",
    "GriddedPmf",
    "GridTooLargeError",
    "KnapsackInstance",
    "LossTable",
    "Marginal",
    "NotAnAtomError",
    "OddPExactError",
    "OtCurve",
    "OtValue",
    "OtdpError",
    "PlanDescriptor",
    "ProductDistribution",
    "RegularGrid1D",
    "RoundingReport",
    "TooManyAtomsError",
    "TwoPointTarget",
    "ZeroWeightsError",
    "compute_U",
    "convolve_losses",
    "count_dp",
    "count_via_ot",
    "critical_index",
    "detect_spanned_grid",
    "enumerate_atoms",
    "epsilon_bar",
    "error_bound",
    "format_rational",
    "loss_table",
    "min_of_wasserstein_over_t",
    "minkowski_grid",
    "ot_approx",
    "ot_closed_form",
    "ot_exact",
    "parity_normalize",
    "parse_rational",
    "plan_descriptor",
    "plan_query",
    "reduction_target",
    "round_to_lattice",
    "scaled_cvar",
    "slope",
    "validate_instance",
    "with_adversarial_noise",
]
