"""Shared fixtures."""

import logging

import pytest

from scaffold_gms.localfield import DEFAULT_TERM_LIMIT, set_term_limit

# (b, h, d, w, dd, ee) for p = 2, n = 2, b_1 = b_2 = b
BIQUADRATIC_TABLE = [
    (1, 1, (0, 0, 0, 0), (0, 0, 0, 0), (0,), (0, 1, 2)),
    (1, 0, (0, 0, 0, 1), (0, 0, 0, 1), (0,), (0, 1, 2, 3)),
    (1, -1, (0, 0, 1, 1), (0, 0, 1, 1), (0,), (0, 1, 2)),
    (1, -2, (0, 1, 1, 1), (0, 0, 0, 1), (0, 1, 2), (0, 1, 2, 3)),
    (3, 3, (0, 0, 1, 2), (0, 0, 1, 2), (0,), (0, 1, 2, 3)),
    (3, 2, (0, 1, 1, 2), (0, 1, 1, 2), (0,), (0, 1, 2)),
    (3, 1, (0, 1, 2, 2), (0, 0, 1, 2), (0, 1, 2), (0, 1, 2, 3)),
    (3, 0, (0, 1, 2, 3), (0, 1, 2, 3), (0,), (0, 1, 2)),
]

# (p, n) pairs small enough for exhaustive checks over every h
SMALL_CASES = [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (5, 2), (7, 1)]

# (p, n) pairs for the inseparable realization
REALIZATION_CASES = [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1)]


def admissible_b(p: int, n: int):
    return [b for b in range(1, p**n) if b % p]


@pytest.fixture(autouse=True)
def isolated_config(tmp_path, monkeypatch):
    """Keep tests away from the user's config file and restore global state."""
    monkeypatch.setenv("SCAFFOLD_CONFIG", str(tmp_path / "config.json"))
    monkeypatch.setattr("scaffold_gms.config_manager.load_dotenv", lambda *args, **kwargs: False)
    for var in ("SCAFFOLD_TERM_LIMIT", "SCAFFOLD_MAX_ORDER", "SCAFFOLD_BFUNCTION_LIMIT",
                "SCAFFOLD_JOBS", "SCAFFOLD_FORMAT", "LOG_LEVEL", "LOG_FILE"):
        monkeypatch.delenv(var, raising=False)
    yield
    set_term_limit(DEFAULT_TERM_LIMIT)
    root = logging.getLogger()
    for handler in root.handlers[:]:
        if type(handler).__module__.startswith(("rich", "logging")):
            root.removeHandler(handler)
            handler.close()
    root.setLevel(logging.WARNING)
