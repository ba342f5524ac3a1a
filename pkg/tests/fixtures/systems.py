"""Pytest fixtures for quasilinear systems."""

import pytest

from riemann.systems.registry import builtin_system


@pytest.fixture()
def subsystem():
    """Velocity subsystem of the plasticity equations."""
    return builtin_system("plasticity-subsystem")


@pytest.fixture()
def wave_particle_system():
    return builtin_system("wave-particle")


@pytest.fixture()
def scalar_document() -> dict:
    """Scalar system f_x + x f_y = f as a configuration document."""
    return {
        "name": "scalar",
        "p": 2,
        "q": 1,
        "m": 1,
        "vars": ["f"],
        "A": [[["1"]], [["x"]]],
        "b": ["f"],
    }
