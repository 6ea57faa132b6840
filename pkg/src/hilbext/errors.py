"""Exception hierarchy shared by all workbench modules."""


class WorkbenchError(Exception):
    """Base class for all errors raised by this package."""


class StructuralError(WorkbenchError):
    """Shapes, parents or index data of the operands do not match."""


class CapacityError(WorkbenchError):
    """A configured size bound was exceeded."""


class NoSolutionError(WorkbenchError):
    """The requested algebraic object does not exist."""


class PreconditionError(WorkbenchError):
    """Documented precondition of an operation violated by the caller."""


class UndecidableError(WorkbenchError):
    """Input phases are not recognisably exact, so no exact verdict exists."""


class ConsistencyError(WorkbenchError):
    """Internal consistency failure; indicates invalid input tables."""


class UnsupportedDegreeError(WorkbenchError):
    """Cochain degree outside the implemented range."""


class ScenarioError(WorkbenchError):
    """Scenario file could not be parsed or validated."""

    def __init__(self, message, path=None, line=None):
        loc = ""
        if path is not None:
            loc = f"{path}:"
            if line is not None:
                loc += f"{line}:"
            loc += " "
        super().__init__(loc + message)
        self.path = path
        self.line = line
