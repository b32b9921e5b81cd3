import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def omega():
    from boundary_wres.residue import omega3

    return omega3()


@pytest.fixture(scope="session")
def oracle_slots():
    """Every derivative slot of every case from the float oracle at h1 = 1 (minutes)."""
    from boundary_wres.oracle import CASES, OracleConfig, case_slots

    cfg = OracleConfig(h1=1.0)
    return {label: case_slots(label, cfg) for label in CASES}
