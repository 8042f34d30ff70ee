"""Exception hierarchy shared by the library and the CLI."""

from __future__ import annotations


class DPCoverError(Exception):
    """Base class for every error raised by dp-cover."""


class ParameterError(DPCoverError, ValueError):
    """A parameter is out of range or malformed."""


class KindMismatchError(DPCoverError, TypeError):
    """A Boolean predicate met a grid example, or the other way round."""


class GeometryError(DPCoverError):
    """A geometric invariant was violated (degenerate face, broken subdivision)."""


class OracleError(DPCoverError):
    """A brute-force oracle refused an instance or found it unsatisfiable."""


class VerificationError(DPCoverError):
    """One or more verification suites failed."""


class ResourceCapError(DPCoverError):
    """An enumeration would exceed its configured cap.

    Attributes:
        what: Name of the enumerated quantity
        requested: Number of items the call would have enumerated
        cap: Configured maximum
        hint: Remediation advice shown to the user
    """

    def __init__(self, what: str, requested: int, cap: int, hint: str = "") -> None:
        self.what = what
        self.requested = requested
        self.cap = cap
        self.hint = hint
        message = f"{what}: {requested:,} exceeds the cap of {cap:,}"
        if hint:
            message = f"{message} ({hint})"
        super().__init__(message)

    def __reduce__(self) -> tuple[type[ResourceCapError], tuple[str, int, int, str]]:
        # Rebuilt from the fields when it crosses a worker-process boundary.
        return (type(self), (self.what, self.requested, self.cap, self.hint))
