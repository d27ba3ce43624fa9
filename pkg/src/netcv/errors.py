"""Exception hierarchy shared across the package."""


class NetcvError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParameterError(NetcvError):
    """A model or configuration parameter is out of its allowed range."""


class InvalidInputError(NetcvError):
    """Input data violates a structural precondition (shape, symmetry, ...)."""


class DegenerateFitError(NetcvError):
    """A fit cannot be computed (e.g. no training pairs at all)."""


class DegenerateSplitError(NetcvError):
    """An edge split has an empty evaluation set."""


class EstimationError(NetcvError):
    """A plug-in estimator (e.g. the community-count estimator) failed."""


class SelectionError(NetcvError):
    """Model selection could not produce a result (all replicates failed)."""


class FormatError(NetcvError):
    """A graph file could not be parsed."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
