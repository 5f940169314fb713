"""
Pytest configuration and fixtures for fluxlab tests.

This module provides reusable fixtures: lattices, fluxes, a seeded random
generator and a scratch output directory.
"""
import os
import sys

import numpy as np
import pytest

# Add repository root to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from fluxlab.schemas import BoundaryCondition, FluxRatio, LatticeSpec


@pytest.fixture
def rng():
    """Seeded random generator; tests never draw unseeded randomness."""
    return np.random.default_rng(20240611)


@pytest.fixture
def open_2x2():
    """2x2 lattice with open boundaries, a single plaquette."""
    return LatticeSpec(n_x=2, n_y=2)


@pytest.fixture
def periodic_lattice():
    """Factory for fully periodic L x L lattices."""

    def make(size: int) -> LatticeSpec:
        return LatticeSpec(
            n_x=size,
            n_y=size,
            bc_x=BoundaryCondition.PERIODIC,
            bc_y=BoundaryCondition.PERIODIC,
        )

    return make


@pytest.fixture
def flux_sixth():
    """Rational flux 1/6."""
    return FluxRatio.rational(1, 6)


@pytest.fixture
def output_dir(tmp_path):
    """Scratch output directory path (not yet created)."""
    return str(tmp_path / "fluxlab_output")
