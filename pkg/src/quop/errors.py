"""Exception hierarchy. ``exit_code`` is what the CLI returns for each family."""


class QuopError(Exception):
    exit_code = 2


class GraphError(QuopError, ValueError):
    """A graph violates one of its structural invariants."""


class GraphParseError(GraphError):
    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class UnknownNodeError(GraphError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown node"


class NumericGuardError(QuopError):
    """Padsize cap exceeded or eigensolver failure."""

    exit_code = 3


class PadsizeError(NumericGuardError):
    pass


class EigenSolverError(NumericGuardError):
    pass
