import numpy as np
import pytest

from hermkin import KernelSpec, argon, assemble_tensor


@pytest.fixture(scope="session")
def vhs1_m3():
    return assemble_tensor(KernelSpec.vhs(1.0, 1.0, 1.0), 3, threshold=0.0)


@pytest.fixture(scope="session")
def vhs1_m4():
    return assemble_tensor(KernelSpec.vhs(1.0, 1.0, 1.0), 4)


@pytest.fixture(scope="session")
def ipl10_m4():
    return assemble_tensor(KernelSpec.ipl(10.0), 4)


@pytest.fixture(scope="session")
def ipl10_m5():
    return assemble_tensor(KernelSpec.ipl(10.0), 5)


@pytest.fixture(scope="session")
def argon_gas():
    return argon()


@pytest.fixture
def rng():
    return np.random.default_rng(20250808)
