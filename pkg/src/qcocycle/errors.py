"""Exception types raised by the library."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class NumericalFailure(ArithmeticError):
    """A numerical result violates a property it is guaranteed to have."""


class DegeneracyError(NumericalFailure):
    """Eigenvalues collide, so an eigenbasis is not determined."""


class WindowOverflow(IndexError):
    """A ladder shift would leave the finite index window."""


class PrecisionExhausted(ArithmeticError):
    """Cancellation consumed more digits than the working precision allows.

    ``recommended_digits`` is a precision at which the computation is
    expected to succeed.
    """

    def __init__(self, message, recommended_digits=None):
        super().__init__(message)
        self.recommended_digits = recommended_digits
