"""Shared exception types.

Every error raised by this package derives from :class:`HocircError` and
carries a short machine-readable ``code`` (e.g. ``"composition-type-mismatch"``)
next to the human-readable message.
"""

from __future__ import annotations


class HocircError(Exception):
    """Base class for all errors raised by hocirc."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code
        self.message = message

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


class SignatureError(HocircError):
    """Raised for malformed signatures (duplicate or undeclared names)."""


class TermTypeError(HocircError):
    """Raised when a term fails to typecheck.

    ``path`` locates the offending subterm as a tuple of child indices from
    the root.
    """

    def __init__(self, code: str, message: str, path: tuple[int, ...] = ()):
        super().__init__(code, message)
        self.path = path

    def __str__(self) -> str:
        loc = "root" if not self.path else ".".join(str(i) for i in self.path)
        return f"{self.code} at {loc}: {self.message}"


class ParseError(HocircError):
    """Raised for unreadable input files; carries line/column when known."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        super().__init__("parse-error", message)
        self.line = line
        self.col = col

    def __str__(self) -> str:
        if self.line is None:
            return f"parse-error: {self.message}"
        if self.col is None:
            return f"parse-error (line {self.line}): {self.message}"
        return f"parse-error (line {self.line}, col {self.col}): {self.message}"


class ModelError(HocircError):
    """Raised for model assignments that do not fit the signature."""


class ExplosionGuard(HocircError):
    """Raised when an enumeration would exceed the configured ceiling."""

    def __init__(self, requested: int, ceiling: int):
        super().__init__(
            "explosion-guard",
            f"enumeration of {requested} assignments exceeds ceiling {ceiling}",
        )
        self.requested = requested
        self.ceiling = ceiling
