"""Shared fixtures: seeded generators and random operator builders."""

import json

import numpy as np
import pytest

from magtrace import CoefficientOperator, make_config


@pytest.fixture
def rng():
    return np.random.default_rng(20260814)


@pytest.fixture
def cfg():
    return make_config(1.0)


def random_operator(rng, max_index=6, count=10, declared_class="L1", seed_extra=0):
    """Sparse random operator with complex entries in the unit box."""
    if seed_extra:
        rng = np.random.default_rng(rng.integers(1 << 30) + seed_extra)
    entries = {}
    for _ in range(count):
        j = int(rng.integers(max_index + 1))
        k = int(rng.integers(max_index + 1))
        entries[(j, k)] = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
    return CoefficientOperator(entries, declared_class)


def dense_matrix(op, size):
    """The operator's coefficients as a dense (j, k) array."""
    out = np.zeros((size, size), dtype=complex)
    for (j, k), value in op.entries.items():
        out[j, k] = value
    return out


@pytest.fixture
def pi0_file(tmp_path):
    path = tmp_path / "pi0.json"
    path.write_text(json.dumps(
        {"entries": [{"j": 0, "k": 0, "re": 1.0, "im": 0.0}], "class": "L1"}))
    return str(path)


@pytest.fixture
def bump_file(tmp_path):
    """Piecewise-linear test function supported on (0, 2), peak 1 at eps = 1/2."""
    path = tmp_path / "bump.json"
    path.write_text(json.dumps(
        {"nodes": [[0.0, 0.0], [0.5, 1.0], [2.0, 0.0]]}))
    return str(path)
