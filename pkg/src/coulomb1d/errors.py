"""Exception hierarchy shared by all coulomb1d modules."""


class Coulomb1DError(Exception):
    """Base class for every error raised by this package."""


class DomainError(Coulomb1DError, ValueError):
    """Argument outside the domain of the function."""


class PoleError(Coulomb1DError, ArithmeticError):
    """Argument sits on a pole (or a node in a denominator)."""


class RangeError(Coulomb1DError, OverflowError):
    """Result not representable in double precision."""


class EvaluationError(Coulomb1DError, RuntimeError):
    """A numerical procedure failed to converge."""


class DegenerateParametersError(DomainError):
    """Parameters for which a requested map is singular."""


class UnsupportedLevelError(Coulomb1DError, ValueError):
    """Operation requested on the divergent (E -> -inf) ground state."""
