import os

import pytest

from core.lattice import full_group, path_graph
from core.models import RunSettings
from core.quantum import make_cluster_state, make_ghz, make_w4
from core.utils import ENV_PREFIX


@pytest.fixture
def chain4():
    return path_graph(4)


@pytest.fixture
def group4(chain4):
    return full_group(chain4)


@pytest.fixture
def phi4(chain4):
    return make_cluster_state(chain4)


@pytest.fixture
def ghz4():
    return make_ghz(4)


@pytest.fixture
def w4():
    return make_w4()


@pytest.fixture
def settings():
    """Fewer restarts than the default keeps the suite fast."""
    return RunSettings(restarts=16)


@pytest.fixture
def clean_env():
    """Drop CLUSTER_NL_* variables that a test (or a loaded .env file) set."""
    before = {k for k in os.environ if k.startswith(ENV_PREFIX)}
    yield
    for key in [k for k in os.environ if k.startswith(ENV_PREFIX) and k not in before]:
        del os.environ[key]
