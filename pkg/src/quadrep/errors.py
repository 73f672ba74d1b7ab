"""Exception hierarchy shared by every quadrep module."""


class QuadRepError(Exception):
    """Base class for all errors raised by quadrep."""


class InvalidArgumentError(QuadRepError, ValueError):
    pass


class OutOfRangeError(InvalidArgumentError):
    """Input exceeds the supported magnitude (values must stay below 2**64)."""


class NotPrimeError(InvalidArgumentError):
    pass


class NoSquareRootError(QuadRepError, ValueError):
    pass


class NotRepresentableError(InvalidArgumentError):
    """The input lies in a residue class the requested form cannot reach."""

    def __init__(self, message, residue=None, modulus=None):
        self.residue = residue
        self.modulus = modulus
        super().__init__(message)


class OracleBoundError(QuadRepError, ValueError):
    pass


class DescentError(QuadRepError, RuntimeError):
    """An arithmetic invariant that is mathematically guaranteed failed to hold.

    Seeing this means there is a bug, never a bad input.
    """


class CertificateParseError(QuadRepError, ValueError):
    def __init__(self, lineno, message):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")
