"""Exception hierarchy shared across the package.

ParseError covers malformed input text (threshold grammar, ratio grammar,
weight lists).  DomainError covers arguments that parse fine but violate an
operation's domain (negative thresholds where t >= 0 is required, alpha
outside (0, 1/2), zero weight vectors, ...).  The CLI maps ParseError to
exit code 2 and DomainError to exit code 3.
"""


class ParseError(ValueError):
    """Input text does not match the accepted grammar."""


class DomainError(ValueError):
    """Well-formed input outside an operation's domain."""


class SizeLimitError(DomainError):
    """Brute-force enumeration guard tripped (too many coordinates)."""


class EmptyFiberError(DomainError):
    """Requested fiber level is not an atom of the distribution."""
