"""Shared exception types."""


class ResourceLimitError(Exception):
    """Raised when a requested computation exceeds the configured size caps."""


class KrausFileError(Exception):
    """Raised on malformed Kraus files; carries the offending line number."""

    def __init__(self, line, message):
        self.line = line
        self.message = message
        super().__init__(f"line {line}: {message}")
