import attr
from typing import Optional, Tuple
import numpy as np

from py_qutrit_correlations.errors import DomainError, EmptyMatrix, ShapeError
from py_qutrit_correlations.utils.attrib_utils import (
    make_square_matrix_validator,
    nonnegative_float_validator,
    positive_int_validator,
)

# |sum p - 1| allowed for distributions assembled from arithmetic
DISTRIBUTION_TOL = 1e-9


def _readonly_float_array(value) -> np.ndarray:
    arr = np.array(value, dtype=float)
    arr.setflags(write=False)
    return arr


@attr.s(frozen=True, eq=False)
class JointDistribution:
    """Joint outcome probabilities P(a, b) for a pair of local measurements

    Rows index the outcomes of the first (signal) measurement and columns
    those of the second (idler) measurement.

    Args:
        probs (np.ndarray): d x d nonnegative probabilities summing to 1
        row_label (str): identifies the first measurement
        col_label (str): identifies the second measurement
    """

    probs: np.ndarray = attr.ib(
        converter=_readonly_float_array,
        validator=make_square_matrix_validator(nonnegative=True),
    )
    row_label: str = attr.ib(default="A")
    col_label: str = attr.ib(default="B")

    @probs.validator
    def _check_total(self, attribute, value):
        total = float(np.sum(value))
        if abs(total - 1.0) > DISTRIBUTION_TOL:
            raise DomainError(f"Joint probabilities sum to {total}, not 1")

    @property
    def dim(self) -> int:
        return self.probs.shape[0]

    @property
    def row_marginal(self) -> np.ndarray:
        """p(a|A)"""
        return self.probs.sum(axis=1)

    @property
    def col_marginal(self) -> np.ndarray:
        """p(b|B)"""
        return self.probs.sum(axis=0)


def _optional_positions(value) -> Optional[Tuple[float, ...]]:
    if value is None:
        return None
    return tuple(float(x) for x in value)


@attr.s(frozen=True, eq=False)
class CountMatrix:
    """Coincidence counts for every (signal, idler) detector setting

    Simulated matrices hold integers; tables read from disk may hold
    normalized frequencies instead, which normalize the same way.

    Args:
        counts (np.ndarray): d x d nonnegative counts
        accumulation_time (float): seconds of accumulation per cell
        row_positions (Tuple[float, ...], optional): signal detector positions in um
        col_positions (Tuple[float, ...], optional): idler detector positions in um
    """

    counts: np.ndarray = attr.ib(
        converter=_readonly_float_array,
        validator=make_square_matrix_validator(nonnegative=True),
    )
    accumulation_time: float = attr.ib(
        default=90.0, validator=nonnegative_float_validator
    )
    row_positions: Optional[Tuple[float, ...]] = attr.ib(
        default=None, converter=_optional_positions
    )
    col_positions: Optional[Tuple[float, ...]] = attr.ib(
        default=None, converter=_optional_positions
    )

    @row_positions.validator
    @col_positions.validator
    def _check_positions(self, attribute, value):
        if value is not None and len(value) != self.counts.shape[0]:
            raise ShapeError(
                f"{attribute.name} has {len(value)} entries for a "
                f"{self.counts.shape[0]}x{self.counts.shape[0]} matrix"
            )

    @property
    def dim(self) -> int:
        return self.counts.shape[0]

    @property
    def total(self) -> float:
        return float(np.sum(self.counts))

    @property
    def is_integral(self) -> bool:
        return bool(np.all(self.counts == np.round(self.counts)))

    def __eq__(self, other) -> bool:
        if not isinstance(other, CountMatrix):
            return NotImplemented
        return (
            np.array_equal(self.counts, other.counts)
            and self.accumulation_time == other.accumulation_time
            and self.row_positions == other.row_positions
            and self.col_positions == other.col_positions
        )

    def check_not_empty(self) -> None:
        if not self.total > 0:
            raise EmptyMatrix(f"Count matrix has total {self.total}")


@attr.s(frozen=True)
class EstimateWithError:
    """Mean and sample standard deviation over repeated runs

    Args:
        mean (float): the average
        std (float): the sample standard deviation (0 for a single run)
        n_samples (int): how many runs were averaged
    """

    mean: float = attr.ib(converter=float)
    std: float = attr.ib(converter=float, validator=nonnegative_float_validator)
    n_samples: int = attr.ib(validator=positive_int_validator)

    @std.validator
    def _check_single_sample(self, attribute, value):
        if self.n_samples == 1 and value != 0.0:
            raise DomainError(f"A single sample has std 0, got {value}")

    @property
    def std_of_mean(self) -> float:
        return self.std / float(np.sqrt(self.n_samples))

    def __str__(self) -> str:
        return f"{self.mean:.4f} +/- {self.std:.4f} (n={self.n_samples})"
