# tests/conftest.py

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import pytest

from src.backend.exact.matrix import MatrixR
from src.backend.weights.gegenbauer02 import gegenbauer02_recurrence

I2 = MatrixR.identity(2)
S = MatrixR.from_rows([[0, 1], [1, 0]])
E = MatrixR.from_rows([[1, -1], [-1, 1]])
J = MatrixR.from_rows([[1, 1], [1, 1]])

BUNDLE_DIR = Path(__file__).resolve().parents[1] / "evaluation" / "bundles"


def mat(*rows) -> MatrixR:
    return MatrixR.from_rows(rows)


@pytest.fixture
def l52():
    """Closed-form lambda = 5/2 recurrence, 12 levels."""
    return gegenbauer02_recurrence(Fraction(5, 2), 12)


@pytest.fixture
def bundle_dir() -> Path:
    return BUNDLE_DIR


@pytest.fixture(autouse=True)
def _isolated_env(monkeypatch):
    for name in ("MVOP_LOG", "MVOP_N_VERIFY", "MVOP_BUNDLE_DIR"):
        monkeypatch.delenv(name, raising=False)
