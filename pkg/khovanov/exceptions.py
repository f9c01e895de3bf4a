"""Error hierarchy; each leaf maps onto a CLI exit code."""

from typing import Any, Optional


class KhovanovError(Exception):
    """Base class for all errors raised by the package."""

    exit_code = 3


class DiagramParseError(KhovanovError, ValueError):
    """Malformed PD input. ``position`` is the character offset of the bad token."""

    exit_code = 2

    def __init__(self, message: str, position: Optional[int] = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class InputError(KhovanovError, ValueError):
    """Bad arguments, corpus files or limits."""

    exit_code = 2


class ConsistencyError(KhovanovError, RuntimeError):
    """An internal invariant failed (d^2 != 0, non-unit face ratio, ...)."""

    exit_code = 3

    def __init__(self, message: str, **context: Any):
        self.context = context
        if context:
            detail = ", ".join(f"{k}={v}" for k, v in sorted(context.items()))
            message = f"{message} [{detail}]"
        super().__init__(message)
