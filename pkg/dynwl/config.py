"""
Runtime settings read from the environment.

Example usage:
    from dynwl.config import Settings

    settings = Settings.from_env()
    reports = run_all(corpus, dyn_corpus, workers=settings.workers)
"""

import logging
import os
from collections.abc import Mapping
from dataclasses import dataclass

from .exceptions import ConfigurationError
from .oracle import ISO_NODE_LIMIT

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def _int_setting(env: Mapping[str, str], name: str, minimum: int) -> int | None:
    raw = env.get(name)
    if raw is None or raw.strip() == "":
        return None
    try:
        value = int(raw)
    except ValueError:
        raise ConfigurationError(
            f"{name} must be an integer", context={"variable": name, "value": raw}
        ) from None
    if value < minimum:
        raise ConfigurationError(
            f"{name} must be >= {minimum}", context={"variable": name, "value": value}
        )
    return value


@dataclass(frozen=True)
class Settings:
    """
    Process-wide knobs.

    Attributes:
        workers: Thread pool size for verification suites (1 = sequential)
        quantize_digits: Round loaded attributes to this many decimals (None = off)
        log_level: Root log level name for the CLI
        oracle_max_nodes: Node bound for brute-force isomorphism search
    """

    workers: int = 1
    quantize_digits: int | None = None
    log_level: str = "WARNING"
    oracle_max_nodes: int = ISO_NODE_LIMIT

    @classmethod
    def from_env(cls, env: Mapping[str, str] | None = None) -> "Settings":
        """
        Load settings from DYNWL_* environment variables.

        Args:
            env: Mapping to read instead of os.environ (for tests)

        Returns:
            Settings with defaults for unset variables

        Raises:
            ConfigurationError: A variable is set to an invalid value

        Example:
            # DYNWL_WORKERS=4 DYNWL_LOG_LEVEL=info dynwl verify all ...
            settings = Settings.from_env()
        """
        env = os.environ if env is None else env
        level = env.get("DYNWL_LOG_LEVEL", "").strip().upper() or cls.log_level
        if level not in LOG_LEVELS:
            raise ConfigurationError(
                "DYNWL_LOG_LEVEL is not a log level",
                context={"value": level, "allowed": ",".join(LOG_LEVELS)},
            )
        workers = _int_setting(env, "DYNWL_WORKERS", minimum=1)
        max_nodes = _int_setting(env, "DYNWL_ORACLE_MAX_NODES", minimum=1)
        return cls(
            workers=cls.workers if workers is None else workers,
            quantize_digits=_int_setting(env, "DYNWL_QUANTIZE_DIGITS", minimum=0),
            log_level=level,
            oracle_max_nodes=cls.oracle_max_nodes if max_nodes is None else max_nodes,
        )

    @property
    def log_level_value(self) -> int:
        return logging.getLevelNamesMapping()[self.log_level]
