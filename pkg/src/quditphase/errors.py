"""Exception types shared across the package."""


class QuditError(Exception):
    """Base class for all domain errors raised by this package."""


class NotInvertible(QuditError):
    """A ring element has no multiplicative inverse modulo d."""


class DomainMismatch(QuditError):
    """Operands live over different moduli or particle counts."""


class NotIsotropic(QuditError):
    """A submodule is not isotropic for the symplectic form."""


class NotMaximal(QuditError):
    """A submodule does not have the size required of a maximal isotropic one."""


class NotSymplectic(QuditError):
    """A matrix does not preserve the symplectic form."""


class NotUnitary(QuditError):
    """An operator is not unitary within tolerance."""


class NotNormalized(QuditError):
    """A state vector is not normalized within tolerance."""


class NotHermitian(QuditError):
    """An operator is not Hermitian within tolerance."""


class NotSymmetric(QuditError):
    """A quadratic form matrix is not symmetric mod d."""


class NotPrimePower(QuditError):
    """The modulus is not a prime power, so field formulas do not apply."""


class OrderMismatch(QuditError):
    """Two phase space points have different orders, so no symplectic map links them."""


class BudgetExceeded(QuditError):
    """An enumeration would exceed the configured size budget."""


class SynthesisFailure(QuditError):
    """Metaplectic synthesis kept producing numerically null intertwiners."""


class NotClifford(QuditError):
    """A unitary does not normalize the Weyl group.

    Attributes carry the witness generator label and the spread of the
    conjugated operator over the Weyl basis.
    """

    def __init__(self, message, witness=None, spread=None):
        super().__init__(message)
        self.witness = witness
        self.spread = spread


class NotPermutation(QuditError):
    """Conjugation does not act as a permutation of the phase point operators."""


class TheoremViolation(QuditError):
    """A pure state with non-negative Wigner function failed stabilizer checks.

    This should never fire; it exists so the classifier cannot silently
    mislabel such a state.
    """


class SingularGram(QuditError):
    """A basis has a singular trace Gram matrix, so no dual basis exists."""


class ParseError(QuditError):
    """Bad input file or configuration."""
