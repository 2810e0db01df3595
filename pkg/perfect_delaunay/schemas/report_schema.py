"""
Verification report models and their text/JSONL renderings.
"""

import enum
import json
from typing import Any

from pydantic import BaseModel, ConfigDict, Field


class CheckStatus(str, enum.Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    SKIPPED = "SKIPPED"
    BUDGET = "BUDGET"


_COLORS = {
    CheckStatus.PASS: "\033[32m",
    CheckStatus.FAIL: "\033[31m",
    CheckStatus.SKIPPED: "\033[2m",
    CheckStatus.BUDGET: "\033[33m",
}
_RESET = "\033[0m"


class CheckResult(BaseModel):
    """One (record, check) row"""
    record_id: str
    check: str
    status: CheckStatus
    expected: str = ""
    computed: str = ""
    detail: str = ""
    elapsed: float = Field(default=0.0, ge=0)
    payload: dict[str, Any] | None = None

    model_config = ConfigDict(frozen=True)

    def to_dict(self, include_timings: bool = False) -> dict[str, Any]:
        out: dict[str, Any] = {
            "record": self.record_id,
            "check": self.check,
            "status": self.status.value,
            "expected": self.expected,
            "computed": self.computed,
            "detail": self.detail,
        }
        if self.payload is not None:
            out["payload"] = self.payload
        if include_timings:
            out["elapsed"] = round(self.elapsed, 3)
        return out


class VerificationReport(BaseModel):
    """All rows of a verify run, in catalog order then check order"""
    results: tuple[CheckResult, ...] = ()

    model_config = ConfigDict(frozen=True)

    def counts(self) -> dict[str, int]:
        out = {s.value: 0 for s in CheckStatus}
        for r in self.results:
            out[r.status.value] += 1
        return out

    def exit_code(self) -> int:
        """0 all PASS/SKIPPED, 1 any FAIL, 3 any BUDGET without FAIL."""
        statuses = {r.status for r in self.results}
        if CheckStatus.FAIL in statuses:
            return 1
        if CheckStatus.BUDGET in statuses:
            return 3
        return 0

    def to_jsonl(self, include_timings: bool = False) -> str:
        return "".join(
            json.dumps(r.to_dict(include_timings), sort_keys=True, ensure_ascii=False) + "\n"
            for r in self.results
        )

    def to_text(self, color: bool = False, include_timings: bool = False) -> str:
        headers = ["record", "check", "status", "expected", "computed"]
        rows = [[r.record_id, r.check, r.status.value, r.expected, r.computed] for r in self.results]
        if include_timings:
            headers.append("seconds")
            for row, r in zip(rows, self.results):
                row.append(f"{r.elapsed:.2f}")
        widths = [max([len(h)] + [len(row[i]) for row in rows]) for i, h in enumerate(headers)]

        def line(cells: list[str], status: CheckStatus | None = None) -> str:
            padded = [c.ljust(w) for c, w in zip(cells, widths)]
            if status is not None:
                padded[2] = f"{_COLORS[status]}{padded[2]}{_RESET}"
            return "  ".join(padded).rstrip()

        out = [line(headers)]
        for row, r in zip(rows, self.results):
            out.append(line(row, r.status if color else None))
            if r.detail and r.status is not CheckStatus.PASS:
                out.append(f"    {r.detail}")
        summary = ", ".join(f"{k} {v}" for k, v in self.counts().items())
        out.append(f"{len(self.results)} checks: {summary}")
        return "\n".join(out) + "\n"
