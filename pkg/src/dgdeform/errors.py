"""Error classes; the CLI maps each one to its own exit code."""


class DGError(Exception):
    exit_code = 1


class SchemaError(DGError):
    """Malformed input data or a violated structural identity."""
    exit_code = 2


class PreconditionError(DGError):
    """The input is well formed but outside an operation's hypotheses."""
    exit_code = 3


class InternalError(DGError):
    """A self-check failed; this is always a bug."""
    exit_code = 4


def check(cond, msg):
    if not cond:
        raise InternalError(msg)
