"""Exception hierarchy.

All errors derive from ``ValueError`` so callers that only care about bad
input can catch that.  :class:`PremiseError` is kept apart from everything
else: it signals that a theorem's hypothesis does not hold for the input,
which is a different thing from the theorem's conclusion failing.
"""


class SsalabError(ValueError):
    """Base class for all package errors."""


class PreconditionError(SsalabError):
    """An argument violates an operation's precondition."""


class InvalidStateError(SsalabError):
    """A matrix fails the density-matrix invariants."""


class NotHermitianError(SsalabError):
    """Matrix is not Hermitian within tolerance."""

    def __init__(self, defect, bound):
        self.defect = defect
        self.bound = bound
        super().__init__(
            f"matrix is not Hermitian: ||A - A^H||_F = {defect:.3e} exceeds {bound:.3e}"
        )


class SupportError(SsalabError):
    """Relative entropy requested with supp(rho) not inside supp(sigma)."""


class PremiseError(SsalabError):
    """The hypothesis of a verified statement is not met by the input."""


class DimensionError(PreconditionError):
    """Incompatible or oversized dimensions."""
