from datetime import datetime

import pytest

from flopverify.domain.flop_catalog import AssertionResult, StructureCheck
from flopverify.domain.mutation_replay import ReplayResult
from flopverify.domain.report import Report, Verdict


@pytest.fixture
def assertions():
    """Fixture providing two passing assertions in different groups."""
    return [
        AssertionResult("L1", "hom(A, B) = 0", True, "VanishingCertified", "0", "orthogonal"),
        AssertionResult("L5", "hom(C, D) = V", True, "Exact", "V"),
    ]


class TestReport:
    def test_lemmas_only_verdict(self, assertions):
        """A lemma-only report passes without a replay"""
        report = Report(id=None, case="C2", assertions=assertions, only_lemmas=True)
        assert report.verdict is Verdict.PASS
        assert report.lemmas_passed

    def test_missing_replay_fails(self, assertions):
        """A full report without a replay fails"""
        report = Report(id=None, case="C2", assertions=assertions)
        assert report.verdict is Verdict.FAIL
        report.replay = ReplayResult("C2")
        assert report.verdict is Verdict.PASS

    def test_failures(self, assertions):
        """Failed assertions, structure checks and errors fail the report"""
        failing = AssertionResult("L1", "x", False, "EulerOnly", "?")
        assert Report(None, "C2", assertions=[*assertions, failing], only_lemmas=True).verdict is Verdict.FAIL
        broken = StructureCheck("omega_V", False, "computed (0,0)")
        assert Report(None, "C2", structure=[broken], only_lemmas=True).verdict is Verdict.FAIL
        assert Report(None, "C2", only_lemmas=True, error="bad data").verdict is Verdict.FAIL
        replay = ReplayResult("C2", mismatches=["position 0"])
        assert Report(None, "C2", replay=replay).verdict is Verdict.FAIL

    def test_group_summary(self, assertions):
        """Assertions are summarized per group in order"""
        failing = AssertionResult("L1", "x", False, "EulerOnly", "?")
        report = Report(None, "AG4", assertions=[*assertions, failing])
        assert report.group_summary() == [
            {"group": "L1", "total": 2, "passed": 1, "ok": False},
            {"group": "L5", "total": 1, "passed": 1, "ok": True},
        ]

    def test_to_dict_is_deterministic(self, assertions):
        """Without timings two reports of the same run serialize identically"""
        first = Report(None, "C2", assertions=assertions, only_lemmas=True, timings={"total": 1.0})
        second = Report(
            None,
            "C2",
            assertions=assertions,
            only_lemmas=True,
            timings={"total": 2.0},
            created_at=datetime(2020, 1, 1),
        )
        assert first.to_dict() == second.to_dict()
        assert "timings" not in first.to_dict()
        assert "replay" not in first.to_dict()

    def test_to_dict_with_timings(self, assertions):
        """Timings and creation time are included on request"""
        report = Report(
            None, "C2", assertions=assertions, timings={"total": 1.5}, created_at=datetime(2020, 1, 1)
        )
        data = report.to_dict(include_timings=True)
        assert data["timings"] == {"total": 1.5}
        assert data["created_at"] == "2020-01-01T00:00:00"
        assert data["verdict"] == "FAIL"
        assert data["assertions"][0]["label"] == "hom(A, B) = 0"
