"""Exception hierarchy shared by the library, the catalog loader and the CLI."""

from __future__ import annotations


class DelaunayError(Exception):
    """Base exception for perfect-delaunay errors"""
    pass


class DimensionMismatchError(DelaunayError, ValueError):
    """Raised when vector or matrix sizes disagree"""
    pass


class DomainError(DelaunayError, ValueError):
    """Raised when an argument lies outside the domain of an operation"""
    pass


class NotPositiveDefiniteError(DelaunayError):
    """Raised when an LDL pivot is not strictly positive"""

    def __init__(self, index: int, pivot) -> None:
        self.index = index
        self.pivot = pivot
        super().__init__(f"not positive definite: leading minor {index} has pivot {pivot}")


class NotFullDimensionalError(DelaunayError):
    """Raised when a point set does not affinely span its ambient space"""

    def __init__(self, affine_rank: int, dimension: int) -> None:
        self.affine_rank = affine_rank
        self.dimension = dimension
        super().__init__(f"points span an affine space of rank {affine_rank}, expected {dimension}")


class NotPerfectError(DelaunayError):
    """Raised when the circumscribed quadric of a point set is not unique"""

    def __init__(self, nullspace_dimension: int, reason: str | None = None) -> None:
        self.nullspace_dimension = nullspace_dimension
        super().__init__(reason or f"quadric space has dimension {nullspace_dimension}, expected 1")


class BudgetExceeded(DelaunayError):
    """Raised when a search crosses its candidate or node budget"""

    def __init__(self, what: str, limit) -> None:
        self.what = what
        self.limit = limit
        super().__init__(f"budget exceeded: {what} (limit {limit})")


class CatalogError(DelaunayError):
    """Raised when a catalog file violates the record schema"""

    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class OrbitParseError(CatalogError):
    """Raised when orbit notation is malformed or its multiplicity is wrong"""

    def __init__(self, text: str, reason: str, line: int | None = None) -> None:
        self.text = text
        self.reason = reason
        super().__init__(f"orbit {text!r}: {reason}", line)


class UnknownRecordError(CatalogError, KeyError):
    """Raised when a record id is not in the catalog"""

    def __init__(self, record_id: str) -> None:
        self.record_id = record_id
        super().__init__(f"unknown record {record_id!r}")

    def __str__(self) -> str:
        return self.args[0]


class UnknownCheckError(DelaunayError, KeyError):
    """Raised when a check name is not one of the known checks"""

    def __init__(self, name: str, known) -> None:
        self.name = name
        super().__init__(f"unknown check {name!r}; known checks: {', '.join(known)}")

    def __str__(self) -> str:
        return self.args[0]
