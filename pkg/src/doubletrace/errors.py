"""Exception types shared across the library.

The CLI maps these onto its exit-code contract: refusals exit 1, input
errors exit 2, exhausted budgets exit 3.
"""

from __future__ import annotations


class DoubleTraceError(Exception):
    """Base class for every error raised by this package."""


# --- input and precondition errors (CLI exit code 2) -----------------------


class ParseError(DoubleTraceError):
    """Malformed edge-list or trace input."""


class NotSimple(DoubleTraceError):
    """The input contains a loop or a repeated vertex pair."""


class NotConnected(DoubleTraceError):
    """The input graph is not connected."""


class NotAWalk(DoubleTraceError):
    """Consecutive vertices of a walk are not adjacent."""


class NotDoubleCover(DoubleTraceError):
    """Some edge is not covered exactly twice by the walk collection."""


class WrongLength(DoubleTraceError):
    """A walk is empty or otherwise has an unusable length."""


class NotANeighborSet(DoubleTraceError):
    """A repetition query used a set that is not a subset of N(v)."""


class UnknownEdge(DoubleTraceError):
    """Edge id outside 0..|E|-1."""


class UnknownVertex(DoubleTraceError):
    """Vertex id outside 0..|V|-1."""


class IncoherentCorners(DoubleTraceError):
    """A walk collection whose corner pairs at some vertex do not form a
    single cyclic order, so no embedding can realize it."""

    def __init__(self, message: str, vertex: int | None = None):
        super().__init__(message)
        self.vertex = vertex


class NotStrong(DoubleTraceError):
    """A double trace with a multi-cycle vertex figure where a strong trace
    was required."""

    def __init__(self, message: str, vertex: int | None = None):
        super().__init__(message)
        self.vertex = vertex


# --- principled refusals (CLI exit code 1) ----------------------------------


class Refusal(DoubleTraceError):
    """A construction declined because the graph provably lacks the object."""


class DegreeTooSmall(Refusal):
    """Minimum degree rules out the requested d-stable trace."""

    def __init__(self, message: str, vertex: int, degree: int):
        super().__init__(message)
        self.vertex = vertex
        self.degree = degree


class NotEulerian(Refusal):
    """An odd-degree vertex rules out a parallel double trace."""

    def __init__(self, message: str, vertex: int):
        super().__init__(message)
        self.vertex = vertex


class NoSuchTrace(Refusal):
    """The decision procedure certified that no such trace exists."""

    def __init__(self, message: str, reason: str):
        super().__init__(message)
        self.reason = reason


class IsATree(Refusal):
    """Trees have no nonorientable one-face embedding."""


# --- resource and internal errors -------------------------------------------


class BudgetExceeded(DoubleTraceError):
    """A search or enumeration cap was hit; the verdict is unknown, not 'no'.

    CLI exit code 3.
    """


class InternalInconsistency(DoubleTraceError):
    """An invariant the algorithms guarantee was violated; this is a bug."""
