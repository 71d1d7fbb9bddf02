import numpy as np
import pytest

from roughrisk import DecisionTable
from roughrisk.accel import warmup


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    # absorb any JIT compile cost before timed tests run
    warmup()


@pytest.fixture
def t8() -> DecisionTable:
    """Eight objects over binary a, b with binary decision d; the
    worked reference table used throughout the suite."""
    cond = np.array(
        [[0, 0], [0, 0], [0, 0], [0, 1], [1, 0], [1, 1], [1, 1], [1, 1]]
    )
    dec = np.array([0, 0, 1, 1, 0, 1, 1, 0])
    return DecisionTable(
        objects=tuple(f"u{i}" for i in range(1, 9)),
        condition_attrs=("a", "b"),
        decision_attr="d",
        condition_values=cond,
        decision_values=dec,
    )
