# src/shared/errors.py
# NOTE:
# One exception class per domain error variant. The CLI prints the class name,
# so renaming a class changes the user-visible contract.

from __future__ import annotations

from typing import Optional, Tuple


class MvopError(ValueError):
    """Base class of every domain error raised by this package."""


class SingularMatrix(MvopError):
    """A square matrix that had to be inverted (or solved against) is singular."""


class SizeMismatch(MvopError):
    """Operands have incompatible shapes or block sizes."""


class SingularPivot(MvopError):
    """
    beta_n is singular during the Darboux factorization: the chosen alpha_0
    is inadmissible at this level.
    """

    def __init__(self, level: int, message: Optional[str] = None) -> None:
        self.level = level
        super().__init__(message or f"beta_{level} is singular; alpha_0 is inadmissible at level {level}")


class InsufficientLevels(MvopError):
    """The truncation does not hold enough levels for the request."""


class InsufficientMoments(MvopError):
    """Not enough moments for the requested inner product or solve."""


class DegenerateMoments(MvopError):
    """The block Hankel system is singular at some level."""

    def __init__(self, level: int, message: Optional[str] = None) -> None:
        self.level = level
        super().__init__(message or f"block Hankel system is singular at level {level}")


class InexactParameters(MvopError):
    """Parameters for which the requested moments are not rational."""


class UnsupportedKind(MvopError):
    """Unknown weight family or operator recipe."""


class InvalidCount(MvopError):
    """A count, number of levels, order or power below its minimum."""


class InvalidDelta(MvopError):
    """A point mass outside the support of the weight, or with a non-symmetric mass."""


class DegreeExceeded(MvopError):
    """A coefficient F_i of a differential operator has degree above i."""


class SingularAlpha0(MvopError):
    """alpha_0 must be invertible for the transformed weight."""


class AsymmetricAlpha0(MvopError):
    """alpha_0 must be symmetric for the transformed weight."""


class WindowExhausted(MvopError):
    """Too few levels remain exact after the requested number of products."""


class NotBispectral(MvopError):
    """P_n D - Lambda_n P_n does not vanish: the operator is not in the algebra."""

    def __init__(self, level: int, entry: Tuple[int, int, int], value: object) -> None:
        self.level = level
        self.entry = entry
        self.value = value
        degree, row, col = entry
        super().__init__(
            f"residual at n={level} is nonzero: coefficient of x^{degree}, entry ({row},{col}) = {value}"
        )


class BundleError(MvopError):
    """An input file could not be parsed into a domain object."""
