"""Exception classes shared across the toolkit."""


class FncnlError(Exception):
    """Base class for toolkit errors."""


class FormatError(FncnlError, ValueError):
    """A file or text fragment does not follow its declared format."""

    def __init__(self, message, source=None, line=None):
        self.source = source
        self.line = line
        where = ""
        if source is not None:
            where = f"{source}:{line}: " if line is not None else f"{source}: "
        super().__init__(where + message)


class IntegrityError(FncnlError, ValueError):
    """A reference does not resolve (unknown frame, FE, entity, ...)."""
