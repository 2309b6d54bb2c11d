import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from rkhsreg.kernels import Kernel, KernelExpansion

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

KERNELS = [
    Kernel("gaussian", 2, width=0.7),
    Kernel("polynomial", 2, degree=3, offset=1.0),
    Kernel("linear", 2),
]


@pytest.fixture(params=KERNELS, ids=lambda k: k.family)
def kernel(request):
    return request.param


def random_expansion(rng, kernel, m=5):
    return KernelExpansion(kernel, rng.normal(size=(m, kernel.input_dim)), rng.normal(size=m))


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
