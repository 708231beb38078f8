"""Exception hierarchy.

Every error raised on bad input derives from :class:`QXGError`, which the CLI
maps to exit code 1. :class:`Inconsistent` and :class:`DuplicateEntry` signal
data that contradicts itself and map to exit code 2.
"""


class QXGError(Exception):
    pass


class Inconsistent(QXGError):
    """A constraint graph has an edge whose relation set became empty."""

    def __init__(self, message, edge=None):
        super().__init__(message)
        self.edge = edge


class InvalidScene(QXGError, ValueError):
    def __init__(self, message, frame=None, object_id=None):
        super().__init__(message)
        self.frame = frame
        self.object_id = object_id


class SceneSyntaxError(InvalidScene):
    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line


class SchemaError(InvalidScene):
    pass


class OrderError(InvalidScene):
    pass


class BadParams(QXGError, ValueError):
    pass


class MissingField(QXGError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


class DuplicateEntry(QXGError):
    pass


class UnknownObject(QXGError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


class UnknownPair(QXGError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


class CorruptData(QXGError, ValueError):
    pass
