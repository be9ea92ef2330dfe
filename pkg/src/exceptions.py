"""Custom exceptions for the community detector"""
from typing import List, Optional


class HsgnError(Exception):
    """Base exception for all detector errors"""
    pass


class ConfigError(HsgnError):
    """Raised for configuration issues"""
    pass


class ParameterError(HsgnError):
    """Raised when an operation receives an out-of-range parameter"""
    pass


class ValidationError(HsgnError):
    """Raised for inconsistent inputs"""
    pass


class ShapeError(ValidationError):
    """Raised when matrix dimensions do not agree"""
    pass


class DataError(HsgnError):
    """Raised for problems in input data files"""
    pass


class ParseError(DataError):
    """Raised for a malformed line in an input file"""

    def __init__(self, message: str, line_number: Optional[int] = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class EmptyGraphError(DataError):
    """Raised when an edge list holds no usable edge"""
    pass


class UnknownNodeError(DataError):
    """Raised when a community file references a node missing from the graph"""

    def __init__(self, node_id: str, line_number: int):
        super().__init__(f"line {line_number}: unknown node identifier '{node_id}'")
        self.node_id = node_id
        self.line_number = line_number


class CoverageError(DataError):
    """Raised when some graph nodes belong to no community"""

    def __init__(self, missing: List[str]):
        shown = ", ".join(missing[:20])
        more = f" (and {len(missing) - 20} more)" if len(missing) > 20 else ""
        super().__init__(f"{len(missing)} node(s) without a community: {shown}{more}")
        self.missing = missing


class EnumerationBudgetError(HsgnError):
    """Raised when simple-path enumeration exceeds its extension budget"""
    pass
