from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from credalkit import Cloud, ProbabilityInterval

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.large_base_example],
)
settings.load_profile("default")

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def six_cloud() -> Cloud:
    return Cloud(
        ("u", "v", "w", "x", "y", "z"),
        {"u": "0.5", "v": "0.5", "w": "0.75", "x": "0.5", "y": "0", "z": "0"},
        {"u": "0.75", "v": "1", "w": "1", "x": "0.75", "y": "0.75", "z": "0.5"},
    )


@pytest.fixture
def crossing_cloud() -> Cloud:
    return Cloud(
        ("v", "w", "x", "y", "z"),
        {"v": "0", "w": "0.5", "x": "0.25", "y": "0", "z": "0"},
        {"v": "1", "w": "1", "x": "0.5", "y": "0.5", "z": "0.25"},
    )


@pytest.fixture
def md_intervals() -> ProbabilityInterval:
    return ProbabilityInterval(
        ("w", "x", "y", "z"),
        {"w": "0.10", "x": "0.34", "y": "0.25", "z": "0"},
        {"w": "0.28", "x": "0.56", "y": "0.46", "z": "0.08"},
    )
