import os

import pytest


@pytest.mark.parametrize(
    "cli_command",
    [
        "riemann",
        "riemann dispersion",
        "riemann verify",
        "riemann separation-ode",
        "riemann ode417",
        "riemann tracecheck",
        "riemann die",
        "riemann inhom-check",
        "riemann det-phi",
    ],
)
def test_smoke(cli_command: str) -> None:
    status = os.system(f"{cli_command} --help")
    assert status == 0
