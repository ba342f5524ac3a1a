"""Package-wide numerical defaults."""

import logging
import os
from functools import lru_cache
from pathlib import Path

import yaml  # type: ignore

from riemann.errors import ConfigError

DEFAULT_CONFIG = Path(__file__).parent / "config" / "defaults.yaml"
TOLERANCE_ENV_VAR = "RIEMANN_TOL"


@lru_cache(maxsize=None)
def load_settings() -> dict:
    """Load the default settings yaml file.

    The residual tolerance ``verify.tol`` can be overridden with the
    ``RIEMANN_TOL`` environment variable.

    Returns
    -------
    dict
        Nested dictionary of settings.

    """
    with open(DEFAULT_CONFIG) as f:
        settings = yaml.safe_load(f)

    env_tol = os.environ.get(TOLERANCE_ENV_VAR)
    if env_tol is not None:
        try:
            tol = float(env_tol)
        except ValueError as e:
            raise ConfigError(
                f"{TOLERANCE_ENV_VAR}={env_tol!r} is not a number"
            ) from e
        if not tol > 0:
            raise ConfigError(f"{TOLERANCE_ENV_VAR} must be positive")
        logging.info(f"Residual tolerance overridden to {tol:g}")
        settings["verify"]["tol"] = tol

    return settings


def setting(section: str, key: str):
    """Return a single setting value."""
    return load_settings()[section][key]
