import pytest

from encircle.scenario import bundled_scenario_path, load_scenario


@pytest.fixture(scope="session")
def table1():
    return load_scenario(bundled_scenario_path("table1.json"))
