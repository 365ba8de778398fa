"""Exception hierarchy. Everything raised on purpose derives from Spin2Error."""


class Spin2Error(Exception):
    """Base class for domain errors (CLI maps these to exit code 1)."""


class GraphFormatError(Spin2Error):
    """Malformed graph file; carries the 1-based line number when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DomainError(Spin2Error):
    """Argument outside the mathematical domain (pole, branch cut, ...)."""


class InstanceTooLargeError(Spin2Error):
    """Brute-force enumeration refused: free-vertex count above the cap."""


class NoConvergenceError(Spin2Error):
    """An iterative solver exhausted its iteration budget."""


class CertificationError(Spin2Error):
    """Certification failed: no set matched, or a search collapsed to zero."""


class InternalInconsistencyError(Spin2Error):
    """A sampled quantity violated its analytic bound; signals a bug."""
