import pytest

from riemann.errors import ConfigError
from riemann.settings import TOLERANCE_ENV_VAR, load_settings, setting


@pytest.fixture()
def fresh_settings():
    load_settings.cache_clear()
    yield
    load_settings.cache_clear()


def test_defaults(fresh_settings, monkeypatch):
    monkeypatch.delenv(TOLERANCE_ENV_VAR, raising=False)

    assert setting("verify", "tol") == 1e-5
    assert setting("differences", "scheme") == "central-4th"
    assert load_settings()["grid"]["nx"] == 9


def test_tolerance_override(fresh_settings, monkeypatch):
    monkeypatch.setenv(TOLERANCE_ENV_VAR, "1e-7")
    assert setting("verify", "tol") == 1e-7


@pytest.mark.parametrize("value", ["tight", "0", "-1e-6"])
def test_invalid_override(fresh_settings, monkeypatch, value):
    monkeypatch.setenv(TOLERANCE_ENV_VAR, value)
    with pytest.raises(ConfigError, match=TOLERANCE_ENV_VAR):
        load_settings()
