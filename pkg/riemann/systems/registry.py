"""Builtin systems shipped as JSON documents."""

import json
from pathlib import Path
from typing import Optional, Union

from riemann.errors import InputError
from riemann.systems.spec import SystemSpec, parse_system_config

BUILTIN_DIR = Path(__file__).parent / "builtin"
BUILTIN_PREFIX = "builtin:"


def available_systems() -> list[str]:
    """Names of the builtin systems."""
    return sorted(p.stem for p in BUILTIN_DIR.glob("*.json"))


def builtin_system(
    name: str,
    constants: Optional[dict] = None,
    potential: Optional[str] = None,
) -> SystemSpec:
    """Load a builtin system.

    Parameters
    ----------
    name : str
        One of :func:`available_systems`, e.g. ``"plasticity-subsystem"``.
    constants : dict, optional
        Overrides for named constants (``rho`` for plasticity-full,
        ``a`` for wave-particle).
    potential : str, optional
        Potential expression in the coordinates (plasticity-full).

    Returns
    -------
    SystemSpec
        The system.

    """
    path = BUILTIN_DIR / f"{name}.json"
    if not path.is_file():
        raise InputError(
            f"Unknown system '{name}'. "
            f"Available: {', '.join(available_systems())}"
        )
    with open(path) as f:
        document = json.load(f)

    if constants:
        unknown = set(constants) - set(document.get("constants", {}))
        if unknown:
            raise InputError(
                f"System '{name}' has no constant(s) {sorted(unknown)}"
            )
        document["constants"] = {**document["constants"], **constants}
    if potential is not None:
        if "potential" not in document:
            raise InputError(f"System '{name}' takes no potential")
        document["potential"] = potential

    return parse_system_config(document)


def load_system(
    source: Union[str, Path],
    constants: Optional[dict] = None,
    potential: Optional[str] = None,
) -> SystemSpec:
    """Load ``builtin:NAME`` or a JSON file path."""
    source = str(source)
    if source.startswith(BUILTIN_PREFIX):
        return builtin_system(
            source[len(BUILTIN_PREFIX) :], constants, potential
        )
    path = Path(source)
    if not path.is_file():
        raise InputError(f"System file {source} not found")
    return parse_system_config(path)
