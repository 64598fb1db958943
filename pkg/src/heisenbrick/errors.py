"""Exception hierarchy. The CLI maps each class to an exit code."""


class HeisenbrickError(Exception):
    exit_code = 1


class InputError(HeisenbrickError, ValueError):
    """Malformed or out-of-contract input."""

    exit_code = 2


class ResourceError(HeisenbrickError):
    """A configured cap (brute force, fibers, field size) would be exceeded."""

    exit_code = 3


class ComputationError(HeisenbrickError):
    """Exact arithmetic could not be carried out (accumulator overflow)."""

    exit_code = 3


class ClaimFailure(HeisenbrickError):
    """A proven statement failed on a concrete instance.

    ``witness`` holds something a reader can check by hand.
    """

    exit_code = 1

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
