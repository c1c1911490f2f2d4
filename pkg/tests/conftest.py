"""Session fixtures shared by the acceptance criteria.

The benchmark is built once: the shipped suite at seed 7, a stratified split
at seed 0, and the model trained on the training part.
"""

import pytest

from tactile_regrasp.config import load_config
from tactile_regrasp.evaluation import split_dataset
from tactile_regrasp.model import train
from tactile_regrasp.synthworld import generate_dataset

DATA_SEED = 7
SPLIT_SEED = 0
POLICY_SEED = 99


@pytest.fixture(scope="session")
def shipped():
    return load_config()


@pytest.fixture(scope="session")
def benchmark_data(shipped):
    return generate_dataset(shipped.objects, shipped.n_per_object, shipped.geometry, shipped.shake,
                            DATA_SEED, shipped.noise_scale)


@pytest.fixture(scope="session")
def benchmark_split(shipped, benchmark_data):
    return split_dataset(benchmark_data, shipped.test_fraction, SPLIT_SEED)


@pytest.fixture(scope="session")
def benchmark_model(shipped, benchmark_split):
    params, history = train(benchmark_split[0], shipped.model)
    return params, history
