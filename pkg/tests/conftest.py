"""
Shared fixtures: bundled sample tables, detector presets and an isolated
settings/output environment for every test.
"""

import shutil

import pytest

from app.settings import BUNDLED_DATA_DIR, get_settings
from modules.V1.corephysics.models import PAPER_CONSTANTS, get_detector
from modules.V1.datastore.services import DataService
from modules.V1.muonbackground.models import SET_G
from modules.V1.thermalbolometer.models import CUORE, UPGRADED


@pytest.fixture(autouse=True)
def isolated_settings(monkeypatch, tmp_path):
    """Settings rebuilt per test, outputs under tmp_path."""
    monkeypatch.setenv("CSLBG_OUT_DIR", str(tmp_path / "out"))
    monkeypatch.delenv("CSLBG_DATA_DIR", raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture(name="constants", scope="session")
def fixture_constants():
    return PAPER_CONSTANTS


@pytest.fixture(name="ge10", scope="session")
def fixture_ge10():
    return get_detector("ge10")


@pytest.fixture(name="cuore_detector", scope="session")
def fixture_cuore_detector():
    return get_detector("cuore")


@pytest.fixture(name="cuore", scope="session")
def fixture_cuore():
    return CUORE


@pytest.fixture(name="upgraded", scope="session")
def fixture_upgraded():
    return UPGRADED


@pytest.fixture(name="data", scope="session")
def fixture_data():
    return DataService(BUNDLED_DATA_DIR)


@pytest.fixture(name="gran_sasso", scope="session")
def fixture_gran_sasso(data):
    return data.depth_intensity("gran_sasso")


@pytest.fixture(name="standard_rock", scope="session")
def fixture_standard_rock(data):
    return data.depth_intensity("standard_rock")


@pytest.fixture(name="lead_table", scope="session")
def fixture_lead_table(data):
    return data.attenuation("lead")


@pytest.fixture(name="ge_table", scope="session")
def fixture_ge_table(data):
    return data.attenuation("germanium")


@pytest.fixture(name="spectrum", scope="session")
def fixture_spectrum(data):
    return data.gamma_spectrum()


@pytest.fixture(name="set_g", scope="session")
def fixture_set_g():
    return SET_G


@pytest.fixture(name="data_copy")
def fixture_data_copy(tmp_path):
    """Writable copy of the bundled data directory."""
    target = tmp_path / "data"
    shutil.copytree(BUNDLED_DATA_DIR, target)
    return target
