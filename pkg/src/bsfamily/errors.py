"""Exception types raised by the pipeline.

Each failure mode the CLI distinguishes has its own class so that callers
can map them onto exit codes without string matching.
"""


class BsFamilyError(Exception):
    exit_code = 1


class ParseError(BsFamilyError):
    exit_code = 2


class NotGenericallyRational(BsFamilyError):
    """A polynomial in s is not a constant multiple of a rational one mod Q."""

    exit_code = 3


class IrrationalRoots(BsFamilyError):
    """b0 has a factor without rational roots."""

    exit_code = 4


class DecompositionUnsupported(BsFamilyError):
    exit_code = 5


class ResourceError(BsFamilyError):
    """A step budget or scan cap was exhausted."""

    exit_code = 6


class MalformedCertificate(BsFamilyError):
    exit_code = 7


class InternalInconsistency(BsFamilyError):
    """A guard that should be unreachable fired (inexact division etc.)."""

    exit_code = 8
