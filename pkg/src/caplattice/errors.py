"""Exception types raised by the library.

Every error derives from :class:`CapLatticeError`; the command line reports
the class name of whatever was raised, so names are part of the interface.
"""


class CapLatticeError(ValueError):
    """Base class for all domain errors."""


class NotAPoset(CapLatticeError):
    pass


class NotALattice(CapLatticeError):
    def __init__(self, pair, kind="meet"):
        self.pair = tuple(pair)
        self.kind = kind
        super().__init__(f"pair {self.pair[0]!r}, {self.pair[1]!r} has no unique {kind}")


class CapExceeded(CapLatticeError):
    def __init__(self, what, reached, cap):
        self.reached = reached
        self.cap = cap
        super().__init__(f"{what}: reached {reached}, cap is {cap}")


class UnknownElement(CapLatticeError):
    pass


class DuplicateElement(CapLatticeError):
    pass


class EmptyGenerator(CapLatticeError):
    pass


class NotComparable(CapLatticeError):
    pass


class NotDominating(CapLatticeError):
    pass


class NotADownSet(CapLatticeError):
    pass


class Unreducible(CapLatticeError):
    pass


class NotMonotone(CapLatticeError):
    pass


class NegativeValue(CapLatticeError):
    pass


class NotACapacity(CapLatticeError):
    pass


class NotACdf(CapLatticeError):
    pass


class NotCompletelyMonotone(CapLatticeError):
    pass


class NotCompletelyAlternating(CapLatticeError):
    pass


class MarginalMismatch(CapLatticeError):
    pass


class NotATree(CapLatticeError):
    pass


class RootNotInTree(CapLatticeError):
    pass


class NotMonotonePath(CapLatticeError):
    pass


class Infeasible(CapLatticeError):
    pass


class DimensionMismatch(CapLatticeError):
    pass


class ProblemFormatError(ValueError):
    """A problem file that cannot be read; not a domain error."""
