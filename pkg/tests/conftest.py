import hypothesis
import pytest

from viewprm import OracleCostmap, RobotModel, make_office_scene

hypothesis.settings.register_profile(
    "suite",
    max_examples=50,
    deadline=None,
    derandomize=True,
)
hypothesis.settings.load_profile("suite")


@pytest.fixture(scope="session")
def robot():
    return RobotModel()


@pytest.fixture(scope="session")
def office():
    return make_office_scene()


@pytest.fixture(scope="session")
def office_backend(office, robot):
    return OracleCostmap(office, robot)
