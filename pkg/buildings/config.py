"""
Runtime settings read from the environment.
"""
import logging
import os

logger = logging.getLogger(__name__)

DEFAULT_ORBIT_CAP = 10000
DEFAULT_PORT = 8080

project_root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def _int_setting(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        logger.warning("Ignoring %s=%r: not an integer, using %d", name, raw, default)
        return default
    if value <= 0:
        logger.warning("Ignoring %s=%r: must be positive, using %d", name, raw, default)
        return default
    return value


def orbit_cap() -> int:
    """Maximum orbit size before an action is declared infinite."""
    return _int_setting("LAMBDA_BUILDINGS_ORBIT_CAP", DEFAULT_ORBIT_CAP)


def data_dir() -> str:
    return os.environ.get("LAMBDA_BUILDINGS_DATA_DIR", os.path.join(project_root, "data"))


def port() -> int:
    return _int_setting("PORT", DEFAULT_PORT)
