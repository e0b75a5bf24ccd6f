import os

# keep test runs from writing bbs.log into the working tree
os.environ.setdefault("LOG_FILE", "")

import pytest

from app.api.schemas.qubo import Graph
from app.services.bench import KITCHEN_INSTANCE
from app.services.qubo import build_variable_map, load_jssp_instance

# makespan-3 schedule of the kitchen instance, in variable order
# [x_1,1,0, x_1,2,2, x_2,1,0, x_2,1,1, x_2,1,2, x_3,1,0, x_3,1,1]
KITCHEN_OPTIMUM = [1, 1, 0, 0, 1, 1, 0]


@pytest.fixture
def kitchen():
    return load_jssp_instance(KITCHEN_INSTANCE)


@pytest.fixture
def kitchen_map(kitchen):
    return build_variable_map(kitchen)


@pytest.fixture
def k2():
    return Graph(n=2, edges=[(0, 1)])


@pytest.fixture
def k3():
    return Graph(n=3, edges=[(0, 1), (0, 2), (1, 2)])


@pytest.fixture
def k4():
    return Graph(n=4, edges=[(i, j) for i in range(4) for j in range(i + 1, 4)])
