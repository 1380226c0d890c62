import numpy as np
import pytest

from py_qutrit_correlations.distributions import CountMatrix
from py_qutrit_correlations.parsing.parse_count_matrix import save_count_matrix_csv
from py_qutrit_correlations.states import random_schmidt_state

# published normalized coincidence tables; rows are signal positions y1..y3,
# columns idler positions x1..x3
IMAGE_PLANE_TABLE = [
    [0.281, 0.024, 0.003],
    [0.006, 0.287, 0.014],
    [0.002, 0.006, 0.376],
]
FOCAL_PLANE_TABLE = [
    [0.344, 0.017, 0.017],
    [0.008, 0.017, 0.260],
    [0.017, 0.302, 0.017],
]


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture
def random_qutrits(rng):
    return [random_schmidt_state(rng, 3) for _ in range(1000)]


@pytest.fixture
def image_plane_counts():
    return CountMatrix(IMAGE_PLANE_TABLE)


@pytest.fixture
def focal_plane_counts():
    return CountMatrix(FOCAL_PLANE_TABLE)


@pytest.fixture
def published_table_files(tmp_path, image_plane_counts, focal_plane_counts):
    image = save_count_matrix_csv(image_plane_counts, tmp_path / "image.csv")
    focal = save_count_matrix_csv(focal_plane_counts, tmp_path / "focal.csv")
    return str(image), str(focal)
