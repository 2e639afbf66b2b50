"""Exception hierarchy shared by the solver core, the service, and the CLI.

Every error carries the process exit code the CLI maps it to:
2 = bad input, 3 = grid cap exceeded, 4 = atom cap exceeded,
5 = count disagreement.
"""


class OtdpError(Exception):
    """Base class for all solver errors."""

    exit_code = 2


class DimensionMismatchError(OtdpError):
    """Target and marginal dimensions disagree."""


class BadProbabilitiesError(OtdpError):
    """Probabilities are negative or do not sum to one."""


class DuplicateSupportError(OtdpError):
    """A marginal lists the same support point twice."""


class BadTError(OtdpError):
    """Mixing weight t outside [0, 1], or an operation that needs 0 < t < 1."""


class BadRationalError(OtdpError):
    """Text that does not encode a rational as 'a' or 'a/b' with b > 0."""


class EmptyInputError(OtdpError):
    """An operation received an empty collection where values are required."""


class BadToleranceError(OtdpError):
    """Approximation tolerance must be a positive rational."""


class GridTooLargeError(OtdpError):
    """Detected or derived grid exceeds the configured point cap."""

    exit_code = 3


class TooManyAtomsError(OtdpError):
    """Explicit atom enumeration would exceed the configured cap."""

    exit_code = 4


class OddPExactError(OtdpError):
    """Exact mode requires an even integer cost exponent."""


class ZeroWeightsError(OtdpError):
    """All knapsack weights are zero; the geometric reduction is undefined."""


class NotAnAtomError(OtdpError):
    """Queried point has zero probability under the product distribution."""


class CountMismatchError(OtdpError):
    """Oracle-based and direct knapsack counts disagree."""

    exit_code = 5
