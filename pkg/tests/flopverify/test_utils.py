import logging
from datetime import datetime, timedelta

import pytest

from flopverify.utils import LogUtils


@pytest.fixture
def restore_root_logger():
    """Fixture restoring root logger handlers and level after a test."""
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield root
    root.handlers[:] = handlers
    root.setLevel(level)


class TestLogUtils:
    def test_setup_logging_console_and_file(self, tmp_path, restore_root_logger):
        """Console and file handlers are installed at the requested level"""
        log_file = tmp_path / "logs" / "run.log"
        logger = LogUtils.setup_logging(level="DEBUG", file_path=log_file)
        assert logger.level == logging.DEBUG
        assert len(logger.handlers) == 2

        logging.getLogger("flopverify.test").debug("replay step 1")
        for handler in logger.handlers:
            handler.flush()
        assert "replay step 1" in log_file.read_text(encoding="utf-8")

    def test_setup_logging_without_console(self, restore_root_logger):
        """No handlers without console or file"""
        logger = LogUtils.setup_logging(level="WARNING", console=False)
        assert logger.handlers == []
        assert logger.level == logging.WARNING

    def test_execution_summary(self, caplog):
        """The summary reports status and errors"""
        start = datetime(2025, 1, 1, 12, 0, 0)
        with caplog.at_level(logging.INFO):
            LogUtils.log_execution_summary(
                start, start + timedelta(seconds=3), success=False, errors=["C2: bad script"]
            )
        assert "Status: FAILED" in caplog.text
        assert "Errors encountered: 1" in caplog.text
        assert "C2: bad script" in caplog.text

    def test_handle_error(self, caplog):
        """Errors are logged with their context and returned"""
        with caplog.at_level(logging.ERROR):
            message = LogUtils.handle_error(RuntimeError("boom"), "flopverify verify")
        assert message == "flopverify verify - Error: boom"
        assert message in caplog.text

    def test_get_logger(self):
        """Loggers are looked up by name"""
        assert LogUtils.get_logger("flopverify.cli") is logging.getLogger("flopverify.cli")

    def test_single_entry_point(self):
        """Logging helpers are reached through LogUtils only"""
        import flopverify.utils as utils

        for name in ("setup_logging", "get_logger", "log_execution_summary", "handle_error"):
            assert not hasattr(utils, name)
            assert callable(getattr(LogUtils, name))
