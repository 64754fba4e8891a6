"""Exception types shared across the package."""


class DensityLabError(Exception):
    """Base class for all package-specific errors."""


class PerfectSquareError(DensityLabError):
    """The discriminant-style argument must not be a perfect square."""


class VerificationFailureError(DensityLabError):
    """A self-check of a constructed value failed (implementation bug)."""


class NotCoprimeError(DensityLabError):
    """Arguments were required to be coprime / pairwise coprime."""


class BudgetExhaustedError(DensityLabError):
    """A search bound was hit before enough witnesses were found."""


class IncompatibleCongruencesError(DensityLabError):
    """CRT input contains two conflicting congruences.

    The conflicting pair is attached as ``witness``.
    """

    def __init__(self, first, second):
        self.witness = (first, second)
        super().__init__(f"incompatible congruences {first} and {second}")


class NotAPUnionError(DensityLabError):
    """The set expression is not a finite union of arithmetic progressions."""


class InexactOracleError(DensityLabError):
    """A certificate was requested from a search-bounded residue oracle."""


class BoundNotReachedError(DensityLabError):
    """The certified product bound did not reach the requested epsilon."""

    def __init__(self, epsilon, achieved):
        self.epsilon = epsilon
        self.achieved = achieved
        super().__init__(f"product bound {achieved} did not reach epsilon {epsilon}")


class DigestMismatchError(DensityLabError):
    """The certificate was generated for a different set expression."""


class InsufficientDivergenceError(DensityLabError):
    """The partial sum of reciprocal moduli is below the divergence threshold."""

    def __init__(self, partial_sum, threshold):
        self.partial_sum = partial_sum
        self.threshold = threshold
        super().__init__(
            f"partial sum {float(partial_sum):.6f} below threshold {float(threshold):.6f}"
        )


class ChainInvariantViolatedError(DensityLabError):
    """A divisibility-chain prefix violates its structural invariants."""


class DegreeTooLowError(DensityLabError):
    """The polynomial has degree <= 1, so its image has positive density.

    ``exact_density`` carries the exact density of the image (1/|a| for
    degree one, 0 for a constant, whose image is a single point).
    """

    def __init__(self, degree, exact_density):
        self.degree = degree
        self.exact_density = exact_density
        super().__init__(f"degree {degree} polynomial; image density {exact_density}")


class NoUsablePrimesError(DensityLabError):
    """No prime below the budget admits the required root/witness structure."""


class SquareDiscriminantError(DensityLabError):
    """The form's discriminant is a perfect square; no smallness certificate."""


class WrongRegimeError(DensityLabError):
    """The form is not in the mixed-density regime."""


class DegenerateFormError(DensityLabError):
    """All three form coefficients are zero."""
