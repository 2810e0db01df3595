"""Checks on the circumscribed quadric and the plain invariants of a record."""

import logging

from perfect_delaunay.checks.base_check import BaseCheck, Outcome, RecordContext
from perfect_delaunay.core.enumeration import shortest_vectors, verify_delaunay
from perfect_delaunay.core.geometry import spectrum, symmetry_type
from perfect_delaunay.core.perfection import infer_quadratic, perfection_check
from perfect_delaunay.core.qlattice import eval_affine
from perfect_delaunay.schemas.report_schema import CheckStatus

log = logging.getLogger(__name__)


def _notes(ctx: RecordContext, prefix: str) -> str:
    return "; ".join(ctx.record.notes_for(prefix))


class OnSphereCheck(BaseCheck):
    def __init__(self):
        super().__init__("on-sphere")

    def run(self, ctx: RecordContext) -> Outcome:
        off = [v for v in ctx.vertices if eval_affine(ctx.function, v) != 0]
        detail = f"first off-sphere vertex {off[0]}" if off else _notes(ctx, "radius2")
        return Outcome.compare("0 off-sphere", f"{len(off)} off-sphere", detail)


class DelaunayEmptinessCheck(BaseCheck):
    def __init__(self):
        super().__init__("delaunay-emptiness")

    def run(self, ctx: RecordContext) -> Outcome:
        verdict = verify_delaunay(ctx.function, ctx.vertices)
        expected = f"0 interior, {len(ctx.vertices)} boundary"
        boundary = len(ctx.vertices) - len(verdict.missing) + len(verdict.unexpected)
        computed = f"{len(verdict.interior)} interior, {boundary} boundary"
        status = CheckStatus.PASS if verdict.passed else CheckStatus.FAIL
        return Outcome(status, expected, computed, "" if verdict.passed else verdict.describe())


class PerfectionCheck(BaseCheck):
    def __init__(self):
        super().__init__("perfection")

    def run(self, ctx: RecordContext) -> Outcome:
        verdict = perfection_check(ctx.vertices)
        detail = "" if verdict.is_perfect or verdict.nullspace_dimension != 1 else "quadric is not positive definite"
        return Outcome.compare("nullity 1, definite", _describe(verdict), detail)


def _describe(verdict) -> str:
    definite = "definite" if verdict.is_perfect else "not definite"
    return f"nullity {verdict.nullspace_dimension}, {definite}"


class InferMatchesStoredCheck(BaseCheck):
    def __init__(self):
        super().__init__("infer-matches-stored")

    def run(self, ctx: RecordContext) -> Outcome:
        inferred = infer_quadratic(ctx.vertices)
        stored = ctx.function
        mismatches = []
        if inferred.form.gram != stored.form.gram:
            mismatches.append("gram")
        if inferred.center != stored.center:
            mismatches.append(f"center {', '.join(str(c) for c in inferred.center)}")
        if inferred.radius2 != stored.radius2:
            mismatches.append(f"radius2 {inferred.radius2}")
        computed = "identical" if not mismatches else "differs in " + "; ".join(mismatches)
        return Outcome.compare("identical", computed, _notes(ctx, "radius2"))


class SpectrumCheck(BaseCheck):
    def __init__(self):
        super().__init__("spectrum")

    def run(self, ctx: RecordContext) -> Outcome:
        computed = spectrum(ctx.form, ctx.vertices)
        return Outcome.compare(ctx.record.expected.spectrum, computed, _notes(ctx, "spectrum"))


class ShortestCountCheck(BaseCheck):
    def __init__(self):
        super().__init__("shortest-count")

    def run(self, ctx: RecordContext) -> Outcome:
        result = shortest_vectors(ctx.form)
        return Outcome.compare(ctx.record.expected.shortest_count, result.count, f"minimum {result.minimum}")


class SymmetryTypeCheck(BaseCheck):
    def __init__(self):
        super().__init__("symmetry-type")

    def run(self, ctx: RecordContext) -> Outcome:
        computed = symmetry_type(ctx.vertices, ctx.function.center)
        detail = ""
        if computed.value == "centrally-symmetric":
            detail = "2c = (" + ",".join(str(2 * c) for c in ctx.function.center) + ")"
        return Outcome.compare(ctx.record.expected.symmetry_type, computed.value, detail)
