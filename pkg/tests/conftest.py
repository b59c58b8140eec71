import numpy as np
import pytest

from quadmom import backend
from quadmom.params import accel_params


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Trigger JIT compilation once so no individual test pays for it."""
    mus = np.linspace(0.0, 1.0, 5)
    ks = np.arange(1, 4, dtype=np.int64)
    for kernel_id in range(4):
        backend.closed_table(mus, ks, 0.8, kernel_id)
        backend.recurrence_table(mus, np.ones(3), 3, kernel_id)


@pytest.fixture
def p05():
    return accel_params(0.5)


@pytest.fixture
def p08():
    return accel_params(0.8)


@pytest.fixture
def p095():
    return accel_params(0.95)
