from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from typing import Any

from flopverify.domain.flop_catalog import AssertionResult, StructureCheck
from flopverify.domain.mutation_replay import ReplayResult


class Verdict(Enum):
    PASS = "PASS"
    FAIL = "FAIL"


@dataclass
class Report:
    """Entity holding the outcome of one case verification."""

    id: int | None
    case: str
    structure: list[StructureCheck] = field(default_factory=list)
    assertions: list[AssertionResult] = field(default_factory=list)
    replay: ReplayResult | None = None
    timings: dict[str, float] = field(default_factory=dict)
    created_at: datetime = field(default_factory=datetime.now)
    only_lemmas: bool = False
    error: str | None = None

    @property
    def lemmas_passed(self) -> bool:
        return all(a.passed for a in self.assertions)

    @property
    def verdict(self) -> Verdict:
        if self.error is not None or not all(c.passed for c in self.structure):
            return Verdict.FAIL
        if not self.lemmas_passed:
            return Verdict.FAIL
        if not self.only_lemmas and (self.replay is None or not self.replay.passed):
            return Verdict.FAIL
        return Verdict.PASS

    def group_summary(self) -> list[dict[str, Any]]:
        groups: dict[str, list[AssertionResult]] = {}
        for result in self.assertions:
            groups.setdefault(result.group, []).append(result)
        return [
            {
                "group": name,
                "total": len(items),
                "passed": sum(1 for r in items if r.passed),
                "ok": all(r.passed for r in items),
            }
            for name, items in groups.items()
        ]

    def to_dict(self, include_timings: bool = False) -> dict[str, Any]:
        """
        Plain-data view of the report.

        Without timings (and without the creation time) the result is
        identical for identical inputs.
        """
        data: dict[str, Any] = {
            "case": self.case,
            "verdict": self.verdict.value,
            "structure": [
                {"label": c.label, "passed": c.passed, "detail": c.detail}
                for c in self.structure
            ],
            "lemma_groups": self.group_summary(),
            "assertions": [a.to_dict() for a in self.assertions],
        }
        if self.error is not None:
            data["error"] = self.error
        if self.replay is not None:
            replay = self.replay
            data["replay"] = {
                "passed": replay.passed,
                "steps": [c.to_dict() for c in replay.certificates],
                "initial_scene": replay.initial_scene,
                "final_scene": replay.final_scene,
                "target_scene": replay.target_scene,
                "mismatches": replay.mismatches,
                "error": replay.error,
                "initial_gram": replay.initial_gram.to_dict() if replay.initial_gram else None,
                "final_gram": replay.final_gram.to_dict() if replay.final_gram else None,
                "target_gram": replay.target_gram.to_dict() if replay.target_gram else None,
            }
        if include_timings:
            data["timings"] = dict(self.timings)
            data["created_at"] = self.created_at.isoformat()
        return data
