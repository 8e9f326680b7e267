"""Exception types shared across the package.

The CLI maps these onto exit codes: usage problems exit 2, capacity
problems exit 3, unsupported prime powers exit 4.
"""


class LPFError(Exception):
    """Base class for all errors raised by lpf."""


class InvalidInput(LPFError, ValueError):
    pass


class TrivialGroupError(InvalidInput):
    """M_1 and M_2 are trivial and have no primary decomposition."""


class UndefinedS(InvalidInput):
    """S(n) is left undefined for n = 1, 2."""


class CapacityError(LPFError):
    pass


class UnsupportedQ(LPFError):
    pass
