import logging
import time
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Callable

from perfect_delaunay.config import settings
from perfect_delaunay.core.budget import Budget
from perfect_delaunay.core.qlattice import AffineQuadraticFunction, LatticePoint, QuadraticForm
from perfect_delaunay.core.symmetry import (
    LatticeAutGroup,
    PolytopeAutGroup,
    lattice_automorphisms,
    polytope_automorphisms,
)
from perfect_delaunay.exceptions import BudgetExceeded, DelaunayError
from perfect_delaunay.schemas.catalog_schema import PolytopeRecord
from perfect_delaunay.schemas.report_schema import CheckResult, CheckStatus
from perfect_delaunay.services.catalog_service import Catalog, expand_record

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class VerifyOptions:
    budget_seconds: float = settings.BUDGET_SECONDS
    section_budget_seconds: float = settings.SECTION_BUDGET_SECONDS
    candidate_limit: int = settings.CANDIDATE_LIMIT
    export_generators: bool = False


@dataclass
class Outcome:
    status: CheckStatus
    expected: str = ""
    computed: str = ""
    detail: str = ""
    payload: dict[str, Any] | None = None

    @classmethod
    def compare(cls, expected, computed, detail: str = "", payload: dict | None = None) -> "Outcome":
        status = CheckStatus.PASS if expected == computed else CheckStatus.FAIL
        return cls(status, _render(expected), _render(computed), detail, payload)


def _render(value) -> str:
    if isinstance(value, (tuple, list)):
        return ", ".join(_render(v) for v in value)
    return str(value)


@dataclass
class RecordContext:
    """Per-record cache shared by the checks of one record; results and errors are both memoized."""
    record: PolytopeRecord
    catalog: Catalog
    options: VerifyOptions = field(default_factory=VerifyOptions)
    _memo: dict[str, Any] = field(default_factory=dict, repr=False)

    def cached(self, key: str, compute: Callable[[], Any]) -> Any:
        if key not in self._memo:
            try:
                self._memo[key] = (True, compute())
            except DelaunayError as e:
                self._memo[key] = (False, e)
        ok, value = self._memo[key]
        if not ok:
            raise value
        return value

    @property
    def vertices(self) -> tuple[LatticePoint, ...]:
        return self.cached("vertices", lambda: expand_record(self.record))

    @property
    def form(self) -> QuadraticForm:
        return self.cached("form", self.record.form)

    @property
    def function(self) -> AffineQuadraticFunction:
        return self.cached("function", lambda: AffineQuadraticFunction(
            self.form, self.record.center, self.record.radius2_value))

    def budget(self, what: str) -> Budget:
        return Budget(self.options.budget_seconds, f"{what} for {self.record.id}")

    def polytope_group(self) -> PolytopeAutGroup:
        return self.cached("polytope_group", lambda: polytope_automorphisms(
            self.form, self.vertices, self.budget("polytope automorphisms")))

    def lattice_group(self) -> LatticeAutGroup:
        return self.cached("lattice_group", lambda: lattice_automorphisms(
            self.form, self.options.candidate_limit, self.budget("lattice automorphisms")))


class BaseCheck(ABC):
    """Base class for all verification checks"""

    def __init__(self, name: str):
        self.name = name

    @abstractmethod
    def run(self, ctx: RecordContext) -> Outcome:
        """Compute the invariant for the record and compare it with the stored value"""
        pass

    def execute(self, ctx: RecordContext) -> CheckResult:
        """Run the check, turning library errors into report rows"""
        record_id = ctx.record.id
        if ctx.record.is_placeholder:
            return CheckResult(record_id=record_id, check=self.name, status=CheckStatus.SKIPPED,
                               detail="source unavailable")
        start = time.perf_counter()
        try:
            outcome = self.run(ctx)
        except BudgetExceeded as e:
            log.warning("%s on %s: %s", self.name, record_id, e)
            outcome = Outcome(CheckStatus.BUDGET, detail=str(e))
        except DelaunayError as e:
            outcome = Outcome(CheckStatus.FAIL, detail=f"{type(e).__name__}: {e}")
        except Exception as e:
            log.exception("%s crashed on %s", self.name, record_id)
            outcome = Outcome(CheckStatus.FAIL, detail=f"unexpected {type(e).__name__}: {e}")
        elapsed = time.perf_counter() - start
        log.debug("%s on %s: %s in %.2fs", self.name, record_id, outcome.status.value, elapsed)
        return CheckResult(
            record_id=record_id,
            check=self.name,
            status=outcome.status,
            expected=outcome.expected,
            computed=outcome.computed,
            detail=outcome.detail,
            elapsed=elapsed,
            payload=outcome.payload,
        )
