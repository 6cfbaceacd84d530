import pytest

from qdbench.reliability import build_reference_analytic


@pytest.fixture(scope="session")
def analytic_reference_64():
    return build_reference_analytic(64, 10_000)
