import math

import numpy as np
import pytest

from app.core.constants import DEFAULT_OMEGA
from app.logical.catalog import DriveRates


@pytest.fixture
def omega() -> float:
    return DEFAULT_OMEGA


@pytest.fixture
def rates() -> DriveRates:
    return DriveRates()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def theta_grid():
    return np.linspace(-math.pi, math.pi, 50)


@pytest.fixture
def report_dir(tmp_path, monkeypatch):
    """Keeps default report output inside the test's temporary directory."""
    from app.core.config import settings

    monkeypatch.setattr(settings, "REPORT_DIR", str(tmp_path / "reports"))
    return tmp_path / "reports"
