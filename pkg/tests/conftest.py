import pytest

import rsgame as rs


@pytest.fixture(scope="session")
def g2():
    return rs.g2_instance()


@pytest.fixture(scope="session")
def g2_uniform(g2):
    return rs.uniform_strategy(g2, 1), rs.uniform_strategy(g2, 2)
