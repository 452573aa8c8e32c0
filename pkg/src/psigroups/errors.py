class GroupError(ValueError):
    """A table, subgroup or construction violates a group axiom or a domain constraint."""


class ResourceLimitError(RuntimeError):
    """A configured size, node or time budget was exceeded.

    ``progress`` carries whatever partial result the caller can report.
    """

    def __init__(self, message, progress=None):
        super().__init__(message)
        self.progress = progress or {}


class ExprError(ValueError):
    """Base class for group-expression errors."""


class ParseError(ExprError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class SemanticError(ExprError):
    pass
