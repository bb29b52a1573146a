# Runtime configuration and logging setup.
import logging
import os
from dataclasses import dataclass
from functools import lru_cache

from dotenv import load_dotenv

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
SUPPORTED_LANGUAGES = frozenset(["en", "de"])

logger = logging.getLogger("Config")


@dataclass(frozen=True)
class Settings:
    threads: int = 4
    log_dir: str = "logs"
    log_level: str = "INFO"
    language: str = "en"
    default_m: int = 2
    state_file: str = os.path.join("logs", "selftest_state.json")


def _env_path():
    return ".env/config.env" if os.path.isdir(".env") else ".env"


def _positive_int(key, default):
    raw = os.getenv(key)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        logger.warning(f"Ignoring {key}={raw!r}: not an integer, using {default}")
        return default
    if value < 1:
        logger.warning(f"Ignoring {key}={value}: must be >= 1, using {default}")
        return default
    return value


def load_settings():
    """Reads settings from the environment, loading a .env file first if present."""
    load_dotenv(dotenv_path=_env_path())

    level = os.getenv("PDEFORGE_LOG_LEVEL", "INFO").upper()
    if not isinstance(getattr(logging, level, None), int):
        logger.warning(f"Unknown PDEFORGE_LOG_LEVEL {level!r}, using INFO")
        level = "INFO"

    language = os.getenv("PDEFORGE_LANGUAGE", "en").lower()
    if language not in SUPPORTED_LANGUAGES:
        logger.warning(f"Unsupported PDEFORGE_LANGUAGE {language!r}, using en")
        language = "en"

    log_dir = os.getenv("PDEFORGE_LOG_DIR", "logs")
    return Settings(
        threads=_positive_int("PDEFORGE_THREADS", 4),
        log_dir=log_dir,
        log_level=level,
        language=language,
        default_m=_positive_int("PDEFORGE_DEFAULT_M", 2),
        state_file=os.getenv("PDEFORGE_STATE_FILE", os.path.join(log_dir, "selftest_state.json")),
    )


@lru_cache(maxsize=1)
def get_settings():
    return load_settings()


def worker_count(jobs, settings=None):
    """Thread pool size for `jobs` work items, capped by PDEFORGE_THREADS."""
    settings = settings or get_settings()
    return max(1, min(jobs, settings.threads))


def configure_logging(settings=None):
    """Attaches the file and stderr handlers to the root logger, once."""
    settings = settings or get_settings()
    root_logger = logging.getLogger()
    root_logger.setLevel(getattr(logging, settings.log_level))

    if not any(isinstance(h, logging.FileHandler) for h in root_logger.handlers):
        try:
            os.makedirs(settings.log_dir, exist_ok=True)
            fh = logging.FileHandler(os.path.join(settings.log_dir, "pdeforge.log"))
            fh.setFormatter(logging.Formatter(LOG_FORMAT))
            root_logger.addHandler(fh)
        except OSError as e:
            # Read-only working directories still get stderr warnings.
            logger.warning(f"Log file disabled: {e}")

    if not any(getattr(h, "_pdeforge_stderr", False) for h in root_logger.handlers):
        sh = logging.StreamHandler()
        sh.setLevel(logging.WARNING)
        sh.setFormatter(logging.Formatter(LOG_FORMAT))
        sh._pdeforge_stderr = True
        root_logger.addHandler(sh)
