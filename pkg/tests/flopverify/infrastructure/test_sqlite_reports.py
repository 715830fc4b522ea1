import sqlite3
from datetime import datetime

import pytest

from flopverify.domain.flop_catalog import AssertionResult
from flopverify.domain.report import Report
from flopverify.infrastructure.database import SqliteReportRepository


class TestSqliteReportRepository:
    """Test suite for SqliteReportRepository."""

    @pytest.fixture
    def db_path(self, tmp_path):
        """Fixture providing a temporary database path."""
        return str(tmp_path / "test_flopverify.db")

    @pytest.fixture
    def repository(self, db_path):
        """Fixture providing a SqliteReportRepository instance."""
        return SqliteReportRepository(db_path=db_path)

    @pytest.fixture
    def sample_report(self):
        """Fixture providing a lemma-only report."""
        return Report(
            id=None,
            case="C2",
            assertions=[AssertionResult("demo", "hom(O, S^vee) = V^vee", True, "Exact", "V^vee")],
            timings={"lemmas": 0.25},
            created_at=datetime(2025, 1, 1, 12, 0, 0),
            only_lemmas=True,
        )

    def test_table_created(self, repository, db_path):
        """Test that the reports table exists after initialization."""
        conn = sqlite3.connect(db_path)
        cursor = conn.cursor()
        cursor.execute("SELECT name FROM sqlite_master WHERE type='table' AND name='reports'")
        assert cursor.fetchone() is not None
        conn.close()

    def test_save_and_get_all(self, repository, sample_report):
        """Test saving a report and retrieving it."""
        repository.save(sample_report)
        assert sample_report.id is not None

        reports = repository.get_all()
        assert len(reports) == 1
        stored = reports[0]
        assert stored["id"] == sample_report.id
        assert stored["case"] == "C2"
        assert stored["verdict"] == "PASS"
        assert stored["only_lemmas"] is True
        assert stored["created_at"] == "2025-01-01T12:00:00"
        assert stored["report"]["timings"] == {"lemmas": 0.25}
        assert stored["report"]["assertions"][0]["computed"] == "V^vee"

    def test_newest_first(self, repository, sample_report):
        """Test that reports come back newest first."""
        repository.save(sample_report)
        later = Report(id=None, case="AG4", created_at=datetime(2025, 2, 1), only_lemmas=True)
        repository.save(later)

        assert [r["case"] for r in repository.get_all()] == ["AG4", "C2"]

    def test_delete(self, repository, sample_report):
        """Test deleting a stored report."""
        repository.save(sample_report)
        repository.delete(sample_report.id)
        assert repository.get_all() == []

    def test_corrupted_payload(self, repository, sample_report, db_path):
        """Test that unreadable report bodies are listed as empty."""
        repository.save(sample_report)
        conn = sqlite3.connect(db_path)
        conn.execute("UPDATE reports SET report_json = 'not json'")
        conn.commit()
        conn.close()

        assert repository.get_all()[0]["report"] == {}
