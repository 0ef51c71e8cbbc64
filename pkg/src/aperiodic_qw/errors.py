"""Exception types raised by the walk simulator."""


class WalkError(Exception):
    """Base class for all simulator errors."""


class ValidationError(WalkError, ValueError):
    """Invalid input: wrong sizes, non-normalized spinors, bad parameters."""


class LatticeIndexError(ValidationError, IndexError):
    """A site index or window falls outside the lattice."""


class GuardError(ValidationError):
    """The light-cone guard would be violated (amplitude could reach the edge)."""


class NumericalError(WalkError, ArithmeticError):
    """A numerical routine failed or produced out-of-range results."""


class FitError(NumericalError):
    """Not enough usable samples to fit a power law."""
