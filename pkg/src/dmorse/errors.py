"""Exception types shared across the package."""


class DMorseError(Exception):
    """Base class for all errors raised by dmorse."""


class ParseError(DMorseError, ValueError):
    """Malformed complex, gradient or function file."""


class InvalidMatching(DMorseError, ValueError):
    """A set of pairs that is not a matching of facet pairs on the complex."""


class InvalidMorseFunction(DMorseError, ValueError):
    """A function that violates the discrete Morse conditions."""


class GuardExceeded(DMorseError, RuntimeError):
    """A combinatorial enumeration outgrew its configured limit."""


class BoundarySquareError(DMorseError, RuntimeError):
    """A constructed boundary operator did not square to zero."""
