import pytest

from src import config


def test_settings_are_parsed():
    assert isinstance(config.THREADS, int) and config.THREADS >= 1
    assert isinstance(config.TOL_ROOT, float)
    assert config.MP_DPS >= 20
    assert config.J_MAX >= 8


def test_invalid_setting_is_reported(monkeypatch):
    monkeypatch.setattr(config, "THREADS", "zero")
    monkeypatch.setattr(config, "MP_DPS", "5")
    with pytest.raises(ValueError) as excinfo:
        config.validate_config()
    message = str(excinfo.value)
    assert "WEIERDIV_THREADS" in message
    assert "WEIERDIV_MP_DPS" in message


def test_invalid_log_level(monkeypatch):
    monkeypatch.setattr(config, "LOG_LEVEL", "LOUD")
    with pytest.raises(ValueError, match="WEIERDIV_LOG_LEVEL"):
        config.validate_config()
