import numpy as np
import pytest

from weakf.examples import build_paper_example, build_unit_tangent_flat


@pytest.fixture(scope="session")
def paper22():
    """Main worked example, n=2, s=2, beta=2 (Q != I, h = 0)."""
    return build_paper_example(n=2, s=2, beta=2.0)


@pytest.fixture(scope="session")
def paper_s():
    """The beta=1 member of the same family: a genuine S-manifold."""
    return build_paper_example(n=2, s=2, beta=1.0)


@pytest.fixture(scope="session")
def t1e3():
    """Unit tangent bundle of flat E^3 (dim 5): Q = I, h != 0, kappa = 0."""
    return build_unit_tangent_flat(n=2)


@pytest.fixture(scope="session")
def t1e2():
    """Unit tangent bundle of flat E^2 (dim 3), the n = 1 case."""
    return build_unit_tangent_flat(n=1)


def sample_points(S, count=5, seed=0):
    return S.chart.sample(np.random.default_rng(seed), count)
