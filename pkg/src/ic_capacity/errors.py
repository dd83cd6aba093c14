"""Exception types shared across the package."""


class ResolutionError(ValueError):
    """A variable name does not resolve against the distribution it is used with."""


class SizeCapError(ValueError):
    """A dense tensor (or search grid) would exceed the configured size cap."""


class NumericalConsistencyError(ArithmeticError):
    """A quantity that must be nonnegative came out more negative than rounding noise."""


class DegenerateChannelError(ValueError):
    """A channel cannot be normalized (zero direct gain)."""


class NotManyToOneError(ValueError):
    """A transition tensor does not factor in the many-to-one form."""
