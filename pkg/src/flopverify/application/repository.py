from abc import ABC, abstractmethod

from flopverify.domain.report import Report


class IReportRepository(ABC):
    """Interface for report history operations."""

    @abstractmethod
    def save(self, report: Report) -> None:
        """Save a verification report to the repository."""
        pass

    @abstractmethod
    def get_all(self) -> list[dict]:
        """Retrieve stored reports, newest first, as plain data."""
        pass

    @abstractmethod
    def delete(self, report_id: int) -> None:
        """Delete a stored report by ID."""
        pass
