"""Exception hierarchy.  Each class carries the CLI exit code it maps to."""


class SlopesError(Exception):
    exit_code = 1


class ParseError(SlopesError, ValueError):
    exit_code = 2


class PreconditionError(SlopesError, ValueError):
    exit_code = 3


class CertificationError(PreconditionError):
    """A tail bound is too weak to certify a valuation where it is needed."""


class SlopeViolation(SlopesError):
    exit_code = 4


class InternalInconsistency(SlopesError, AssertionError):
    """Two independent routes to the same quantity disagree."""

    exit_code = 5
