"""Exception hierarchy for dmforms.

Every error raised on a documented failure path derives from DmformsError so
callers (and the CLI) can catch one base class.
"""

from __future__ import annotations


class DmformsError(Exception):
    """Base class for all dmforms errors."""


class ParseError(DmformsError):
    """Raised on malformed expression input; carries the offending position."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class LeadingZero(DmformsError):
    """Raised when inverting a series whose leading coefficient is zero."""


class TruncationExceeded(DmformsError):
    """Raised when a coefficient beyond the known truncation order is requested."""


class Inhomogeneous(DmformsError):
    """Raised when an operation requires a single (weight, depth) grade."""


class OddWeight(DmformsError):
    """Raised when a frame factor is requested for an odd weight."""


class ReconstructionFailed(DmformsError):
    """Raised when Hecke-image coefficients do not lie in the expected space."""


class Singular(DmformsError):
    """Raised by the exact linear solver when the system is rank deficient."""


class Inconsistent(DmformsError):
    """Raised by the exact linear solver when an overdetermined system has no solution."""


class StepFailure(DmformsError):
    """Raised when adaptive ODE integration cannot meet its tolerance."""


class OnDiscriminant(DmformsError):
    """Raised when a parameter point is (numerically) on the discriminant locus."""


class RootSeparationFailure(DmformsError):
    """Raised when the Weierstrass roots are too close to separate reliably."""


class LowImaginaryPart(DmformsError):
    """Raised when an evaluation point is too close to the real axis."""


class PeriodError(DmformsError):
    """Raised when the period pipeline fails an internal consistency check."""


class ZeroScale(DmformsError):
    """Raised when a group action is requested with a vanishing scale factor."""


class DegenerateScale(DmformsError):
    """Raised when a leaf parametrization hits its degenerate scale c4*z - c2 = 0."""


class SingularApproach(DmformsError):
    """Raised when a flow trajectory approaches the singular locus of the field."""


class DiscriminantApproach(DmformsError):
    """Raised when a flow trajectory approaches the discriminant locus."""
