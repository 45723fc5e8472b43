"""Exception types shared across the package."""


class KcoverError(Exception):
    """Base class for all errors raised by this package."""


class PrimalityError(KcoverError):
    """A modulus that must be prime is composite (or out of range)."""


class InconsistencyError(KcoverError):
    """An internal invariant failed, e.g. a degree count that should be
    divisible is not.  Usually signals bad input further up (an inseparable
    polynomial, a wrong ramification type)."""


class NotAPrimeIdeal(KcoverError):
    """(ell, alpha - r) does not define a prime ideal: m(r) != 0 mod ell."""


class BadReduction(KcoverError):
    """Reduction modulo the chosen prime fails: a denominator vanishes,
    a leading coefficient collapses, or the reduced pair is not coprime."""


class CycleTypeError(KcoverError):
    """A cycle-type string does not parse or has the wrong degree."""


class SpecFileError(KcoverError):
    """A cover description file is malformed; message carries the location."""


class CheckpointMismatch(KcoverError):
    """A checkpoint file does not belong to the problem being resumed."""
