import pytest

from rankdesign import PopulationSpec, Power, Role


@pytest.fixture
def benchmark_population():
    """f(x) = 2x, g = sqrt, p = square, e0 = 0: the standard worked instance."""
    return PopulationSpec(
        f=Power(2.0, 1.0, role=Role.SKILL_QUANTILE),
        g=Power(1.0, 0.5, role=Role.EFFORT_TRANSFER),
        p=Power(1.0, 2.0, role=Role.COST_FUNCTION),
        e0=0.0,
    )


@pytest.fixture
def identity_population():
    """f identity on [0,1], same transfer and cost."""
    return PopulationSpec(
        f=Power(1.0, 1.0, role=Role.SKILL_QUANTILE),
        g=Power(1.0, 0.5, role=Role.EFFORT_TRANSFER),
        p=Power(1.0, 2.0, role=Role.COST_FUNCTION),
        e0=0.0,
    )
