import numpy as np
import pytest

from matgrav import BipartiteSpace, DensityOperator, PureState


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_pure(dim_m: int, dim_g: int, seed: int) -> PureState:
    space = BipartiteSpace(dim_m, dim_g)
    g = make_rng(seed)
    v = g.standard_normal(space.total) + 1j * g.standard_normal(space.total)
    return PureState(v / np.linalg.norm(v), space)


def random_density(dim: int, seed: int, rank: int | None = None) -> DensityOperator:
    g = make_rng(seed)
    rank = dim if rank is None else rank
    a = g.standard_normal((dim, rank)) + 1j * g.standard_normal((dim, rank))
    m = a @ a.conj().T
    m /= np.trace(m).real
    return DensityOperator(0.5 * (m + m.conj().T))
