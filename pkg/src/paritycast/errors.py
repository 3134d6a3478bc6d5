"""Exception types shared across the package."""

from __future__ import annotations


class SetupError(RuntimeError):
    """A protocol was started without the pairwise channels it requires."""


class ProtocolAbort(RuntimeError):
    """A protocol aborted (e.g. resource validation failed) before producing output.

    Distinct from a wrong decode: aborts carry no state estimates.
    """

    def __init__(self, message: str, reports=None):
        super().__init__(message)
        self.reports = reports or []


class StateSpaceError(RuntimeError):
    """Exhaustive enumeration would exceed the configured budget."""


class PhaseError(RuntimeError):
    """Wraps a failure with the experiment phase it occurred in."""

    def __init__(self, phase: str, original: BaseException):
        super().__init__(f"[phase={phase}] {original}")
        self.phase = phase
        self.original = original
