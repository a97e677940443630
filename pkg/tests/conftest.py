import numpy as np
import pytest

from dmorse import (
    FaceIndex,
    SimplicialComplex,
    build_two_optima,
    load_poincare,
)
from dmorse.pipeline import pipeline_5manifold


def _random_complex(rng: np.random.Generator, n_vertices: int, dim: int,
                    n_facets: int) -> SimplicialComplex:
    verts = np.arange(1, n_vertices + 1)
    facets = []
    for _ in range(n_facets):
        k = int(rng.integers(1, dim + 2))
        facets.append(tuple(int(v) for v in rng.choice(verts, size=k, replace=False)))
    return SimplicialComplex.from_facets(facets)


@pytest.fixture
def random_complex():
    """Factory for seeded random complexes of bounded size."""
    return _random_complex


@pytest.fixture(scope="session")
def poincare():
    return load_poincare()


@pytest.fixture(scope="session")
def two_optima():
    return build_two_optima()


@pytest.fixture(scope="session")
def rp2():
    return SimplicialComplex.from_facets(
        [(1, 2, 3), (2, 3, 4), (3, 4, 5), (1, 4, 5), (1, 2, 5),
         (1, 3, 6), (3, 5, 6), (2, 5, 6), (2, 4, 6), (1, 4, 6)])


@pytest.fixture(scope="session")
def _pipeline_run():
    """One full pipeline run shared by every test that needs it."""
    messages = []
    stages = pipeline_5manifold(progress=messages.append)
    return stages, messages


@pytest.fixture(scope="session")
def pipeline_stages(_pipeline_run):
    return _pipeline_run[0]


@pytest.fixture(scope="session")
def pipeline_progress(_pipeline_run):
    return _pipeline_run[1]


@pytest.fixture(scope="session")
def collar(pipeline_stages):
    return pipeline_stages[6].complex


@pytest.fixture(scope="session")
def collar_boundary(pipeline_stages):
    return pipeline_stages[7].complex


@pytest.fixture(scope="session")
def collar_index(collar):
    return FaceIndex(collar)
