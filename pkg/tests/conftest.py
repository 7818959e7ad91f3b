"""Shared fixtures: the 1D reference snapshot matrices."""

import pytest

from podsnap.cases1d import Heat1DConfig, gen_advected_jump, gen_sigmoid, solve_heat1d
from podsnap.grids import Grid1D


@pytest.fixture(scope="session")
def heat_matrix():
    """Default 256 x 128 heat-equation matrix."""
    return solve_heat1d(Heat1DConfig())


@pytest.fixture(scope="session")
def jump_matrix():
    """Default 256 x 128 advected-jump matrix."""
    return gen_advected_jump(Grid1D(256), 128)


@pytest.fixture(scope="session")
def sigmoid_steep_matrix():
    return gen_sigmoid(Grid1D(256), 128, k=100.0)


@pytest.fixture(scope="session")
def sigmoid_stretched_matrix():
    return gen_sigmoid(Grid1D(256), 128, k=15.0)


def random_snapshot_matrix(rng, n_dof, n_snaps, rank=None):
    """Random matrix (optionally of limited rank) wrapped for POD."""
    from podsnap.snapshots import matrix_from_array

    if rank is None:
        data = rng.normal(size=(n_dof, n_snaps))
    else:
        data = rng.normal(size=(n_dof, rank)) @ rng.normal(size=(rank, n_snaps))
    return matrix_from_array(data)
