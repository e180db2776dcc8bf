import io
import json
import logging

from grmlab.config import Settings, get_settings
from grmlab.logging_config import LOGGER_NAME, configure_logging


def test_settings_follow_the_environment(monkeypatch):
    assert get_settings().exact_budget == 2**26
    monkeypatch.setenv("GRMLAB_EXACT_BUDGET", "123")
    assert get_settings().exact_budget == 123


def test_testing_settings():
    settings = Settings.for_testing()
    assert settings.testing
    assert settings.redis_url.endswith("/1")


def test_logging_is_json_and_idempotent():
    stream = io.StringIO()
    configure_logging("DEBUG", stream)
    logger = configure_logging("INFO", stream)
    tagged = [h for h in logger.handlers if getattr(h, "_grmlab", False)]
    assert len(tagged) == 1
    logging.getLogger(LOGGER_NAME).info("scan finished")
    record = json.loads(stream.getvalue().strip().splitlines()[-1])
    assert record["message"] == "scan finished"
    assert record["levelname"] == "INFO"
