class HyperkoszulError(Exception):
    """Base class for all package errors."""


class ParseError(HyperkoszulError, ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None, source: str | None = None):
        self.line = line
        self.column = column
        self.source = source
        where = f"line {line}: " if line is not None else ""
        text = where + message
        if source is not None and column is not None:
            text += "\n  " + source + "\n  " + " " * column + "^"
        super().__init__(text)


class NonAdmissibleError(HyperkoszulError):
    """An operator leaves the chain module of a hypergraph."""


class ChainMapError(HyperkoszulError):
    """A supplied map does not commute with the differentials."""


class FiltrationError(HyperkoszulError):
    """Differential maps a cell onto one born later (or never)."""


class HeaderMismatchError(HyperkoszulError):
    """Two hypergraphs do not share the same ambient vertex table."""


class VerificationError(HyperkoszulError):
    """An internal consistency check failed (exactness, commutativity, ...)."""
