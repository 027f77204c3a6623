"""Exception types shared across the toolkit.

All of them derive from ValueError so that callers who do not care about
the fine-grained kind can catch a single base class.
"""


class LBVerifyError(ValueError):
    """Base class for all toolkit errors."""


class ParameterDomainError(LBVerifyError):
    """A physical parameter is outside its admissible domain (e.g. lambda <= 0)."""


class RangeError(LBVerifyError):
    """A radial coordinate is so large that exponentials would overflow.

    Carries the usable bound in ``r_bound``.
    """

    def __init__(self, message: str, r_bound: float):
        super().__init__(message)
        self.r_bound = r_bound


class DomainError(LBVerifyError):
    """A mathematical expression was evaluated outside its real domain."""


class ForbiddenRegionError(DomainError):
    """A congruence was evaluated where the radial velocity is imaginary (w > E^2)."""


class PoleError(DomainError):
    """An expression was evaluated at a pole of its denominator."""


class ResolutionError(LBVerifyError):
    """A numerical routine was configured too coarsely (e.g. too few ODE steps)."""


class SpecialFunctionError(LBVerifyError):
    """A special-function evaluation failed to converge."""
