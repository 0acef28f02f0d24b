"""Exception hierarchy shared by all modules.

The three error classes correspond to the CLI exit codes 1, 2 and 3.
"""


class StrataKitError(Exception):
    """Base class for all stratakit errors."""

    exit_code = 1


class InvalidInputError(StrataKitError):
    """Malformed or mathematically inadmissible input (exit code 1)."""

    exit_code = 1


class WindowInsufficiencyError(StrataKitError):
    """The level window is too small to decide the requested quantity (exit code 2)."""

    exit_code = 2


class InternalConsistencyError(StrataKitError):
    """Two independent computations of the same quantity disagree (exit code 3).

    This is never caught internally: redundant computations are the
    correctness net of the whole artifact, and a disagreement means a bug
    or an invalid representation slipped through validation.
    """

    exit_code = 3
