"""Lamina number and contained-subpolytope checks."""

import logging

from perfect_delaunay.checks.base_check import BaseCheck, Outcome, RecordContext
from perfect_delaunay.core.budget import Budget
from perfect_delaunay.core.geometry import (
    check_maximal,
    find_scaled_isometric_section,
    lamina_witness_search,
    width_from_functional,
)
from perfect_delaunay.exceptions import BudgetExceeded
from perfect_delaunay.schemas.report_schema import CheckStatus
from perfect_delaunay.services.catalog_service import resolve_reference

log = logging.getLogger(__name__)

SECTION_READING = "H(k) read as the k-cube, 1/2 H(k) as the k-semicube; maximal means no one-step family extension"


class LaminaCheck(BaseCheck):
    def __init__(self):
        super().__init__("lamina")

    def run(self, ctx: RecordContext) -> Outcome:
        stored = ctx.record.expected.lamina
        details = []
        functional = ctx.record.lamina_functional
        if functional is not None:
            width = width_from_functional(ctx.vertices, functional)
            details.append(f"stored functional has width {width}")
            if width != stored - 1:
                return Outcome(CheckStatus.FAIL, str(stored), str(width + 1), "; ".join(details))

        if lamina_witness_search(ctx.vertices, window=1) is not None:
            computed = 2
        else:
            witness = lamina_witness_search(ctx.vertices, window=2)
            if witness is None:
                return Outcome(CheckStatus.FAIL, str(stored), ">= 4", "no width-2 witness")
            computed = 3
            details.append("witness (" + ",".join(str(a) for a in witness.functional) + ")")
        return Outcome.compare(stored, computed, "; ".join(details))


class SubpolytopesCheck(BaseCheck):
    def __init__(self):
        super().__init__("subpolytopes")

    def run(self, ctx: RecordContext) -> Outcome:
        names = ctx.record.expected.subpolytopes
        if not names:
            return Outcome(CheckStatus.SKIPPED, detail="no subpolytopes stored")
        seconds = ctx.options.section_budget_seconds
        found, missing, extendable, timed_out = [], [], [], []
        for name in names:
            target = resolve_reference(name, ctx.catalog)
            budget = Budget(seconds, f"section {name} in {ctx.record.id}")
            try:
                match = find_scaled_isometric_section(target, ctx.form, ctx.vertices, budget)
                if match is None:
                    missing.append(name)
                    continue
                found.append(name)
                verdict = check_maximal(target, ctx.form, ctx.vertices, budget)
                if not verdict.maximal:
                    extendable.append(f"{name} -> {verdict.extension}")
            except BudgetExceeded:
                log.warning("section search for %s in %s ran out of time", name, ctx.record.id)
                timed_out.append(name)

        details = [SECTION_READING]
        if missing:
            details.append("absent: " + ", ".join(missing))
        if extendable:
            details.append("not maximal: " + ", ".join(extendable))
        if timed_out:
            details.append("budget exceeded: " + ", ".join(timed_out))
        if missing or extendable:
            status = CheckStatus.FAIL
        elif timed_out:
            status = CheckStatus.BUDGET
        else:
            status = CheckStatus.PASS
        return Outcome(status, ", ".join(names), ", ".join(found), "; ".join(details))
