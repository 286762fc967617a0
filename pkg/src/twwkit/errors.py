"""Exception hierarchy shared by every module.

The CLI maps these onto its exit codes, so library code raises them rather
than returning sentinel values.
"""

from __future__ import annotations


class TwwkitError(Exception):
    """Base class for all errors raised by the toolkit."""


class ParseError(TwwkitError, ValueError):
    """A text document does not follow its grammar."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class GraphError(TwwkitError, ValueError):
    """Invalid graph data (self-loop, duplicate edge, endpoint out of range)."""


class InvalidCertificate(TwwkitError, ValueError):
    """A width certificate (sequence, expression, decomposition) fails validation."""


class BudgetExceeded(TwwkitError):
    """An exhaustive search would exceed its configured budget.

    ``lower`` and ``upper`` carry whatever bounds were established before
    giving up (``None`` when nothing is known).
    """

    def __init__(self, message: str, lower: int | None = None, upper: int | None = None):
        self.lower = lower
        self.upper = upper
        bounds = []
        if lower is not None:
            bounds.append(f"lower={lower}")
        if upper is not None:
            bounds.append(f"upper={upper}")
        if bounds:
            message = f"{message} ({', '.join(bounds)})"
        super().__init__(message)
