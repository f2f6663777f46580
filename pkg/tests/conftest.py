"""Shared fixtures; puts src/ and the repository root on sys.path."""

import sys
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))
sys.path.insert(0, str(ROOT))

from pfbounds.core import build_kle  # noqa: E402


@pytest.fixture(scope="session")
def repo_root() -> Path:
    return ROOT


@pytest.fixture(scope="session")
def kle10():
    """Ten-term expansion with lambda = 0.3."""
    return build_kle(0.1, 0.2, 0.3, 10)


@pytest.fixture(scope="session")
def kle50():
    """Fifty-term expansion with lambda = 0.1."""
    return build_kle(0.1, 0.2, 0.1, 50)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def composite_gauss(panels: int = 200, order: int = 8):
    """Nodes and weights of composite Gauss-Legendre quadrature on [0, 1]."""
    t, w = np.polynomial.legendre.leggauss(order)
    left = np.arange(panels) / panels
    width = 1.0 / panels
    nodes = (left[:, None] + 0.5 * width * (t[None, :] + 1.0)).ravel()
    weights = np.tile(0.5 * width * w, panels)
    return nodes, weights
