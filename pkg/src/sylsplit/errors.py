"""Exception hierarchy shared by the whole package."""


class SylsplitError(Exception):
    """Base class for all errors raised by this package."""


class CycleParseError(SylsplitError, ValueError):
    """Cycle-notation text could not be parsed.

    Carries the offending token and its character position.
    """

    def __init__(self, message: str, token: str = "", position: int = -1):
        super().__init__(message)
        self.token = token
        self.position = position


class DegreeMismatchError(SylsplitError, ValueError):
    """Permutations or groups of different degrees were combined."""


class NotASubgroupError(SylsplitError, ValueError):
    """An operation required K <= G and the containment failed."""


class NotNormalError(SylsplitError, ValueError):
    """An operation required a normal subgroup and the check failed."""


class ResourceCapError(SylsplitError, RuntimeError):
    """A configured size cap was exceeded.  Names the cap that tripped."""

    def __init__(self, cap_name: str, cap_value: int, needed: int):
        super().__init__(
            f"cap {cap_name}={cap_value} exceeded (needed {needed}); "
            f"override with SYLSPLIT_CAPS"
        )
        self.cap_name = cap_name
        self.cap_value = cap_value
        self.needed = needed


class HypothesisNotSatisfied(SylsplitError):
    """The hypotheses of the theorem being verified do not hold.

    Distinct from internal errors: this is a legitimate outcome for inputs
    outside the theorem's scope, not a bug.
    """


class InternalInconsistency(SylsplitError, AssertionError):
    """A mathematical identity that must hold failed at runtime.

    Never a valid output; indicates a bug in this package.
    """


class ConstructionError(InternalInconsistency):
    """A golden construction failed one of its defining assertions."""


class CatalogError(SylsplitError, ValueError):
    """A catalog file failed to parse or validate."""
