import numpy as np
import pytest

from qmud import QuantizerSpec, Scenario, walsh_hadamard_signatures


def make_scenario(**overrides) -> Scenario:
    """Two-user non-orthogonal baseline; cross-correlation exactly 0.5."""
    params = dict(
        K=2, PG=4,
        signatures=((0.5, 0.5, 0.5, 0.5), (0.5, 0.5, -0.5, 0.5)),
        energies=(1.0, 1.0),
        gains=(1.0, 1.0),
        noise_sigma=0.0,
        quantizer=QuantizerSpec(n_ch=3, amplitude=1.5),
        gamma=0,
        delays=(0,),
        reps_max=1,
        seed=0,
    )
    params.update(overrides)
    return Scenario(**params)


def make_orthogonal(K=2, PG=4, **overrides) -> Scenario:
    params = dict(
        K=K, PG=PG,
        signatures=walsh_hadamard_signatures(K, PG),
        energies=(1.0,) * K,
        gains=(1.0,) * K,
        noise_sigma=0.0,
        quantizer=QuantizerSpec(n_ch=3, amplitude=1.5 * np.sqrt(K)),
        gamma=0,
        delays=(0,),
        reps_max=1,
        seed=0,
    )
    params.update(overrides)
    return Scenario(**params)


def random_unit_signatures(rng: np.random.Generator, K: int, PG: int):
    sig = rng.normal(size=(K, PG))
    sig /= np.linalg.norm(sig, axis=1, keepdims=True)
    return tuple(tuple(row) for row in sig)


@pytest.fixture
def two_user_scenario():
    return make_scenario()
