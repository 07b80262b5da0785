import logging
import pytest

@pytest.fixture(autouse=True)
def set_debug_mode(caplog):
    # Capture the library's debug logging so tests can check `caplog.text`;
    # `pytest -rP` shows it for passing tests too.
    caplog.set_level(logging.DEBUG)
