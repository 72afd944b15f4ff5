"""Shared fixtures for the test suite."""

import numpy as np
import pytest

from hsgrowth.params import validate_params


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def params_t1():
    """Theorem-1 corner parameters (n, p, gamma, alpha) = (3, 1, 3, 3)."""
    return validate_params(3, 1.0, 3.0, 3.0, "theorem-1")


@pytest.fixture
def params_t2():
    """Theorem-2 parameters (n, p, gamma, alpha) = (3, 2, 2, 1)."""
    return validate_params(3, 2.0, 2.0, 1.0, "theorem-2")


@pytest.fixture
def params_log():
    """Log-boundary parameters: gamma = -(n-1)(p-1) with p = 2, n = 3."""
    return validate_params(3, 2.0, -2.0, 1.0, "theorem-1")
