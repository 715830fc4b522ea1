import json
import sqlite3

from flopverify.application.repository import IReportRepository
from flopverify.domain.report import Report


class SqliteReportRepository(IReportRepository):
    """Report history stored in a SQLite database."""

    def __init__(self, db_path: str = "flopverify.db"):
        self._db_path = db_path
        self._init_db()

    def _init_db(self) -> None:
        """Initialize the database and create the reports table."""
        conn = sqlite3.connect(self._db_path)
        cursor = conn.cursor()

        cursor.execute("""
            CREATE TABLE IF NOT EXISTS reports (
                id INTEGER PRIMARY KEY AUTOINCREMENT,
                case_name TEXT NOT NULL,
                verdict TEXT NOT NULL,
                only_lemmas INTEGER DEFAULT 0,
                report_json TEXT NOT NULL,
                created_at DATETIME NOT NULL
            )
        """)

        conn.commit()
        conn.close()

    def save(self, report: Report) -> None:
        """Save a report; the generated row id is written back to the report."""
        conn = sqlite3.connect(self._db_path)
        cursor = conn.cursor()

        try:
            cursor.execute(
                """
                INSERT INTO reports (case_name, verdict, only_lemmas, report_json, created_at)
                VALUES (?, ?, ?, ?, ?)
            """,
                (
                    report.case,
                    report.verdict.value,
                    int(report.only_lemmas),
                    json.dumps(report.to_dict(include_timings=True), sort_keys=True),
                    report.created_at.isoformat(),
                ),
            )
            report.id = cursor.lastrowid
            conn.commit()
        except sqlite3.Error as e:
            conn.rollback()
            raise e
        finally:
            conn.close()

    def get_all(self) -> list[dict]:
        """Retrieve all stored reports, newest first."""
        conn = sqlite3.connect(self._db_path)
        cursor = conn.cursor()

        try:
            cursor.execute(
                "SELECT id, case_name, verdict, only_lemmas, report_json, created_at "
                "FROM reports ORDER BY created_at DESC, id DESC"
            )
            rows = cursor.fetchall()

            reports = []
            for row in rows:
                try:
                    payload = json.loads(row[4])
                except json.JSONDecodeError:
                    # Corrupted rows are listed without their body
                    payload = {}
                reports.append(
                    {
                        "id": row[0],
                        "case": row[1],
                        "verdict": row[2],
                        "only_lemmas": bool(row[3]),
                        "created_at": row[5],
                        "report": payload,
                    }
                )
            return reports
        finally:
            conn.close()

    def delete(self, report_id: int) -> None:
        """Delete a stored report by ID."""
        conn = sqlite3.connect(self._db_path)
        cursor = conn.cursor()

        try:
            cursor.execute("DELETE FROM reports WHERE id = ?", (report_id,))
            conn.commit()
        except sqlite3.Error as e:
            conn.rollback()
            raise e
        finally:
            conn.close()
