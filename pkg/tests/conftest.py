import sys
from pathlib import Path

import pytest

# 添加项目根目录到路径
sys.path.insert(0, str(Path(__file__).parent.parent))

from bilinear_census.bilinear import standard_dot_space  # noqa: E402
from bilinear_census.gf import field_new  # noqa: E402


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: 穷举 / 统计检验，耗时较长")


@pytest.fixture
def f2():
    return field_new(2)


@pytest.fixture
def f3():
    return field_new(3)


@pytest.fixture
def f4():
    return field_new(4)


@pytest.fixture
def dot24(f2):
    """(F_2^4, ·)，类型 N0na"""
    return standard_dot_space(f2, 4)
