"""Pytest configuration file."""

pytest_plugins = [
    "tests.fixtures.systems",
    "tests.fixtures.solutions",
]
