"""Exception types that map onto the CLI's exit-code classes."""


class ParseError(ValueError):
    """Malformed input file: bad header, unparsable date or number, or a
    value that violates a field constraint. Messages carry line numbers."""


class DataError(ValueError):
    """Well-formed data that cannot be used: too few records, missing
    targets, a constant column that cannot be scaled."""


class DomainError(ValueError):
    """Numeric value outside the mathematical domain of an operation, e.g.
    a non-positive absolute temperature or a zero base discharge."""
