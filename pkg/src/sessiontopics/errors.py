"""Error types shared by the file-loading modules."""


class ParseError(ValueError):
    """A file could not be parsed; carries the offending path and line."""

    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        self.path = path
        self.line = line
        prefix = ""
        if path is not None:
            prefix = f"{path}:"
            if line is not None:
                prefix += f"{line}:"
            prefix += " "
        elif line is not None:
            prefix = f"line {line}: "
        super().__init__(prefix + message)


class ValidationError(ValueError):
    """Loaded data violates an invariant (duplicate ids, broken references...)."""
