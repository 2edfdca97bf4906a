"""Exception types raised across the package."""


class InvalidArgument(ValueError):
    """An argument violates an operation's precondition."""


class DisconnectedDomainError(InvalidArgument):
    """The adjacency graph has more than one connected component."""


class InfeasibleLipschitzError(ValueError):
    """The requested Lipschitz constant is below what the samples require."""

    def __init__(self, message, required=None, witness=None):
        super().__init__(message)
        self.required = required
        self.witness = witness


class InfeasibleFillError(ValueError):
    """No gradually varied extension exists for the given samples.

    ``witness`` is ``(x, y, i, j)`` with ``d(x, y) < |i - j|``.
    """

    def __init__(self, message, witness, distance):
        super().__init__(message)
        self.witness = witness
        self.distance = distance


class FormatError(InvalidArgument):
    """Malformed input file; ``line`` is 1-based when known."""

    def __init__(self, message, path=None, line=None):
        where = ":".join(str(p) for p in (path, line) if p is not None)
        super().__init__(f"{where}: {message}" if where else message)
        self.path = path
        self.line = line
