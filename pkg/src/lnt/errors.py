"""Exception hierarchy.

Two branches matter to the CLI: ``DataError`` maps to exit code 2
(bad or missing input) and ``ComputeError`` maps to exit code 3
(analysis cannot produce a value).
"""


class LntError(Exception):
    """Base class for all package errors."""


class DataError(LntError):
    """Input could not be read, parsed or resolved."""


class SnapshotParseError(DataError):
    pass


class RatesParseError(DataError):
    pass


class RateLookupError(DataError):
    pass


class FetchError(DataError):
    pass


class EmptyGraphError(DataError):
    """No usable channels remain after filtering."""


class BudgetError(DataError):
    """Attack budget is not satisfiable on this graph."""


class ComputeError(LntError):
    """A requested quantity is undefined or a solver failed."""


class DisconnectedGraphError(ComputeError):
    """Operation requires a connected graph; pass the largest component."""


class UndefinedMetricError(ComputeError):
    """Metric has no defined value on this graph (e.g. zero variance)."""


class DegenerateFitError(ComputeError):
    """Tail carries no information for the power-law fit."""


class InsufficientDataError(ComputeError):
    """Too few observations for a reliable fit."""
