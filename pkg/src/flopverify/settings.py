import os
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, fields, replace
from pathlib import Path

CONFIG_ENV_VAR = "FLOPVERIFY_CONFIG"
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


@dataclass(frozen=True)
class Settings:
    """Run configuration; every key can be set in a TOML file."""

    lemma_window: int = 6
    max_n: int = 8
    workers: int = 4
    weyl_rank_cap: int = 8
    log_level: str = "INFO"
    db_path: str = "flopverify.db"
    templates_dir: str = "templates"

    def __post_init__(self):
        if self.lemma_window < 0:
            raise ValueError("lemma_window must be non-negative")
        if self.max_n < 1:
            raise ValueError("max_n must be at least 1")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        if self.weyl_rank_cap < 1:
            raise ValueError("weyl_rank_cap must be at least 1")
        if self.log_level.upper() not in LOG_LEVELS:
            raise ValueError(f"log_level must be one of {', '.join(LOG_LEVELS)}")

    @classmethod
    def from_file(cls, path: str | Path) -> "Settings":
        """
        Load settings from a TOML file.

        Raises:
            FileNotFoundError: if the file does not exist
            ValueError: on unknown keys or invalid values
        """
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(f"Config file not found: {path}")
        with open(path, "rb") as config_file:
            data = tomllib.load(config_file)
        data = data.get("flopverify", data)
        known = {f.name: f.type for f in fields(cls)}
        unknown = sorted(set(data) - set(known))
        if unknown:
            raise ValueError(f"Unknown configuration keys: {', '.join(unknown)}")
        return replace(cls(), **data)

    @classmethod
    def load(cls, path: str | Path | None = None) -> "Settings":
        """Settings from ``path``, else from $FLOPVERIFY_CONFIG, else defaults."""
        path = path or os.environ.get(CONFIG_ENV_VAR)
        if path:
            return cls.from_file(path)
        return cls()
