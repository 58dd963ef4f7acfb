"""Exception types shared across the package."""


class HermicurvError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(HermicurvError, ValueError):
    """Operands live in incompatible (real or complex) dimensions."""


class DslError(HermicurvError):
    """Base class for metric-expression errors."""


class DslSyntaxError(DslError):
    """Malformed metric source.  Carries the 1-based source position."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


class DslEvalError(DslError):
    """An expression could not be evaluated at the requested point."""


class CatalogError(HermicurvError, ValueError):
    """Unknown catalog metric name or unsupported dimension."""


class SingularMetricError(HermicurvError):
    """h(p) is numerically singular (condition number above threshold)."""


class InadmissiblePointError(HermicurvError):
    """The metric is defined but not positive definite at the point."""


class DegeneratePlaneError(HermicurvError):
    """The two spanning vectors of a plane are (numerically) dependent."""
