"""Exception types shared across the library."""


class InvalidProbability(ValueError):
    """Face probability c/n falls outside (0, 1]."""


class NoInteriorRoot(ValueError):
    """t = exp(-c(1-t)^d) has no root in (0, 1) for this (d, c)."""


class AtCriticalPoint(ValueError):
    """Quantity is undefined exactly at the homology threshold c*."""


class ScaleExceeded(ValueError):
    """Input is larger than the documented bound of an oracle routine."""


class NotAFixedPoint(ValueError):
    """Supplied t does not satisfy t = exp(-c(1-t)^d) to tolerance."""
