"""
Exceptions raised by the cluster-state nonlocality toolkit.
"""


class ClusterNonlocalityError(Exception):
    """Root of every error raised by the library."""


class DimensionMismatchError(ClusterNonlocalityError, ValueError):
    """Operands live on different numbers of sites."""


class NonHermitianElementError(ClusterNonlocalityError, ValueError):
    """A Pauli word with an odd phase exponent was used where a sign is required."""


class PauliParseError(ClusterNonlocalityError, ValueError):
    """A Pauli label could not be parsed."""


class GraphParseError(ClusterNonlocalityError, ValueError):
    """A graph spec or graph file could not be parsed."""


class GroupTooLargeError(ClusterNonlocalityError, ValueError):
    """Full stabilizer group enumeration was requested above the site limit."""


class StateTooLargeError(ClusterNonlocalityError, ValueError):
    """Dense simulation was requested above the supported number of sites."""


class StateConstructionError(ClusterNonlocalityError, RuntimeError):
    """A constructed state failed its defining eigenvalue equations."""


class MissingVariableError(ClusterNonlocalityError, KeyError):
    """An LHV assignment lacks a variable a constraint needs."""


class SearchSpaceError(ClusterNonlocalityError, ValueError):
    """Exhaustive search would exceed the supported ceiling."""


class NoPathError(ClusterNonlocalityError, ValueError):
    """Three sites do not form a neighbour-to-neighbour path."""


class UnsupportedArityError(ClusterNonlocalityError, ValueError):
    """A party would need more settings than the constructor supports."""


class UnboundLabelError(ClusterNonlocalityError, KeyError):
    """A Bell polynomial label has no measurement setting bound to it."""


class InvalidArgumentError(ClusterNonlocalityError, ValueError):
    """An argument is out of its documented range."""
