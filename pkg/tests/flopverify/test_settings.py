import pytest

from flopverify.settings import CONFIG_ENV_VAR, Settings


class TestSettings:
    def test_defaults(self):
        """Default configuration"""
        settings = Settings()
        assert settings.lemma_window == 6
        assert settings.max_n == 8
        assert settings.workers == 4
        assert settings.weyl_rank_cap == 8
        assert settings.log_level == "INFO"

    def test_invalid_values(self):
        """Out-of-range values are rejected"""
        with pytest.raises(ValueError, match="workers must be at least 1"):
            Settings(workers=0)
        with pytest.raises(ValueError, match="max_n must be at least 1"):
            Settings(max_n=0)
        with pytest.raises(ValueError, match="log_level must be one of"):
            Settings(log_level="LOUD")

    def test_from_file(self, tmp_path):
        """Keys may sit at the top level or in a [flopverify] table"""
        path = tmp_path / "config.toml"
        path.write_text("[flopverify]\nlemma_window = 2\nmax_n = 5\n", encoding="utf-8")
        settings = Settings.from_file(path)
        assert settings.lemma_window == 2
        assert settings.max_n == 5
        assert settings.workers == 4

        path.write_text('workers = 1\nlog_level = "DEBUG"\n', encoding="utf-8")
        assert Settings.from_file(path).workers == 1

    def test_unknown_keys(self, tmp_path):
        """Unknown keys are configuration errors"""
        path = tmp_path / "config.toml"
        path.write_text("lemma_windows = 2\n", encoding="utf-8")
        with pytest.raises(ValueError, match="Unknown configuration keys: lemma_windows"):
            Settings.from_file(path)

    def test_missing_file(self, tmp_path):
        """A missing file is reported"""
        with pytest.raises(FileNotFoundError, match="Config file not found"):
            Settings.from_file(tmp_path / "absent.toml")

    def test_load_from_environment(self, tmp_path, monkeypatch):
        """load() falls back to the environment variable, then to defaults"""
        path = tmp_path / "env.toml"
        path.write_text("max_n = 3\n", encoding="utf-8")
        monkeypatch.setenv(CONFIG_ENV_VAR, str(path))
        assert Settings.load().max_n == 3
        monkeypatch.delenv(CONFIG_ENV_VAR)
        assert Settings.load() == Settings()
