import warnings

import numpy as np
import pytest

import qcmap

warnings.filterwarnings("ignore", message=".*support outside the central quarter.*")


def rel_err(got, want):
    got, want = np.asarray(got), np.asarray(want)
    return float(np.max(np.abs(got - want) / np.abs(want)))


@pytest.fixture(scope="session")
def grid256():
    return qcmap.make_grid(0.0, 8.0, 256)


@pytest.fixture(scope="session")
def grid512():
    return qcmap.make_grid(0.0, 4.0, 512)


@pytest.fixture(scope="session")
def disc_solution_half(grid512):
    """lambda = 0.5 on the unit disc, shared by the solver/regularity tests."""
    mu = qcmap.BeltramiCoefficient(((qcmap.Disc(0.0, 1.0), 0.5),))
    return qcmap.neumann_solve(mu, grid512)


@pytest.fixture(scope="session")
def disc_evaluator_half(disc_solution_half):
    return qcmap.MapEvaluator(disc_solution_half)
