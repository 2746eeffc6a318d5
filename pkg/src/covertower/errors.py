"""Exception types raised across the package.

Every failure carries the witnessing data in its message (and usually as
attributes), so a caller never has to re-derive why a check rejected its
input.
"""

from __future__ import annotations

__all__ = [
    "Error",
    "NoIdentityError",
    "NoInverseError",
    "NotAssociativeError",
    "NotASubgroupError",
    "NotNormalError",
    "UnknownGeneratorError",
    "BadInvolutionError",
    "DisconnectedError",
    "NotALoopError",
    "NotIncidentError",
    "NotSurjectiveError",
    "NotRegularError",
    "DepthExceededError",
    "DepthMismatchError",
    "BondNotSurjectiveError",
    "IncompatibleBondError",
    "NotDenseError",
    "LevelOrderError",
    "ConfigSyntaxError",
    "UnknownReferenceError",
    "DuplicateSectionError",
    "WordSyntaxError",
]


class Error(Exception):
    """Base class for all errors raised by this package."""


# -- group table validation ------------------------------------------------

class NoIdentityError(Error):
    """The table has no two-sided identity element."""


class NoInverseError(Error):
    """Some element has no two-sided inverse."""

    def __init__(self, element: int):
        self.element = element
        super().__init__(f"element {element} has no two-sided inverse")


class NotAssociativeError(Error):
    """The table fails associativity at a concrete triple."""

    def __init__(self, a: int, b: int, c: int):
        self.triple = (a, b, c)
        super().__init__(f"({a}*{b})*{c} != {a}*({b}*{c})")


class NotASubgroupError(Error):
    """A claimed subgroup is not closed, or misses the identity."""


class NotNormalError(Error):
    """A subgroup is not normal in its parent group."""

    def __init__(self, conjugator: int, element: int, conjugate: int):
        self.conjugator = conjugator
        self.element = element
        self.conjugate = conjugate
        super().__init__(
            f"conjugating {element} by {conjugator} gives {conjugate}, "
            "which is outside the subgroup"
        )


class UnknownGeneratorError(Error):
    """A word refers to a generator index with no assigned image."""

    def __init__(self, generator: int, limit: int):
        self.generator = generator
        self.limit = limit
        super().__init__(
            f"generator {generator} out of range (have {limit} generators)"
        )


# -- graphs ----------------------------------------------------------------

class BadInvolutionError(Error):
    """Dart reversal is not a fixed-point-free involution swapping endpoints."""


class DisconnectedError(Error):
    """The graph is not connected."""

    def __init__(self, vertex: int):
        self.vertex = vertex
        super().__init__(f"vertex {vertex} is unreachable from the base vertex")


class NotALoopError(Error):
    """An edge path does not start and end at the base vertex."""


class NotIncidentError(Error):
    """Consecutive darts of a path do not share the required vertex."""


# -- covers ----------------------------------------------------------------

class NotSurjectiveError(Error):
    """The generator images do not generate the whole group."""


class NotRegularError(Error):
    """The cover is not regular, so the requested structure does not exist."""


# -- towers ----------------------------------------------------------------

class DepthExceededError(Error):
    """A depth argument exceeds the depth of the tower."""

    def __init__(self, requested: int, available: int):
        self.requested = requested
        self.available = available
        super().__init__(f"depth {requested} exceeds tower depth {available}")


class DepthMismatchError(Error):
    """Two fibre elements of different depths were combined."""

    def __init__(self, left: int, right: int):
        self.left = left
        self.right = right
        super().__init__(f"depth mismatch: {left} vs {right}")


class BondNotSurjectiveError(Error):
    """A bonding map between consecutive levels is not onto."""

    def __init__(self, level: int):
        self.level = level
        super().__init__(f"bond from level {level + 1} to level {level} is not surjective")


class IncompatibleBondError(Error):
    """A bond does not carry a generator image to the one a level below."""

    def __init__(self, level: int, generator: str):
        self.level = level
        self.generator = generator
        super().__init__(
            f"bond from level {level + 1} to level {level} does not map the image "
            f"of generator {generator!r} to its image at level {level}"
        )


class NotDenseError(Error):
    """Some level map is not surjective, so the leaf is not dense."""

    def __init__(self, levels: tuple[int, ...]):
        self.levels = tuple(levels)
        super().__init__(
            "generator images do not generate the level group at level"
            + ("s " if len(self.levels) != 1 else " ")
            + ", ".join(str(v) for v in self.levels)
        )


# -- borel quotients -------------------------------------------------------

class LevelOrderError(Error):
    """A level pair (i, j) was given with i > j."""

    def __init__(self, i: int, j: int):
        self.pair = (i, j)
        super().__init__(f"level pair ({i}, {j}) requires i <= j")


# -- configuration and word syntax -----------------------------------------

class ConfigSyntaxError(Error):
    """A configuration document is malformed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnknownReferenceError(Error):
    """A configuration refers to a name that was never defined."""

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unknown name {name!r}")


class DuplicateSectionError(Error):
    """A section or group name appears more than once."""

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"duplicate section {name!r}")


class WordSyntaxError(Error):
    """A word string does not match the word grammar."""
