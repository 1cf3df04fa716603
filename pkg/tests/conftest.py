import pytest
from fastapi.testclient import TestClient

from app.core.config import settings
from app.services.freeword import parse_element


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run the slow verification suites")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: full-window checks that take minutes")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def el():
    """Shorthand for building elements from text."""
    return parse_element


@pytest.fixture
def fixture_dir(monkeypatch):
    """Restores the fixture directory after a test that overrides it."""
    monkeypatch.setattr(settings, "FIXTURE_DIR", settings.FIXTURE_DIR)
    return settings.FIXTURE_DIR


@pytest.fixture
def client():
    from app.main import app

    with TestClient(app) as test_client:
        yield test_client
