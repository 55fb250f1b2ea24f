"""Exception hierarchy, mapped onto CLI exit codes by the cli module."""


class TrussHomError(Exception):
    """Base class for all errors raised by this package."""


class InputError(TrussHomError):
    """Malformed input: bad document schema, dangling ids, invalid cells."""


class PreconditionError(TrussHomError):
    """Structurally valid input that violates an operation's precondition
    (crossing edges, non-spherical complex, boundary region not a disk, ...)."""


class InternalCheckError(TrussHomError):
    """A consistency identity that must hold by construction failed;
    indicates a bug, not bad input."""
