import attr
from typing import Sequence, Tuple
import numpy as np

from py_qutrit_correlations.errors import (
    DomainError,
    NegativeCoefficient,
    NormalizationError,
    DimensionError,
)
from py_qutrit_correlations.utils.matrix_utils import schmidt_vector

# |sum c_i^2 - 1| allowed at construction
NORMALIZATION_TOL = 1e-12


def _to_coeff_tuple(value: Sequence[float]) -> Tuple[float, ...]:
    return tuple(float(c) for c in value)


@attr.s(frozen=True)
class SchmidtState:
    """A pure bipartite qudit state sum_i c_i |i>|i> in Schmidt form

    Coefficients are kept in the order given, no sorting is imposed.

    Args:
        coeffs (Tuple[float, ...]): the nonnegative Schmidt coefficients c_i
    """

    coeffs: Tuple[float, ...] = attr.ib(converter=_to_coeff_tuple)

    @coeffs.validator
    def _check_coeffs(self, attribute, value):
        if len(value) < 2:
            raise DimensionError(f"Need at least 2 Schmidt coefficients, got {value}")
        if any(c < 0 for c in value):
            raise NegativeCoefficient(f"Schmidt coefficients must be >= 0: {value}")
        if any(not np.isfinite(c) for c in value):
            raise NormalizationError(f"Schmidt coefficients must be finite: {value}")
        norm_sq = sum(c * c for c in value)
        if abs(norm_sq - 1.0) > NORMALIZATION_TOL:
            raise NormalizationError(
                f"Squared coefficients sum to {norm_sq}, not 1: {value}"
            )

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.coeffs)

    @property
    def probabilities(self) -> np.ndarray:
        """The squared coefficients c_i^2"""
        return self.array**2

    @property
    def vector(self) -> np.ndarray:
        """The d^2 amplitude vector, ordered |a>|b> -> a * d + b"""
        return schmidt_vector(self.coeffs)

    @property
    def c0(self) -> float:
        return self.coeffs[0]

    @property
    def c1(self) -> float:
        return self.coeffs[1]

    @property
    def c2(self) -> float:
        return self.coeffs[2]


def new_schmidt_state(coeffs: Sequence[float]) -> SchmidtState:
    """Builds a validated state. The coefficients are not renormalized.

    Args:
        coeffs (Sequence[float]): the Schmidt coefficients

    Raises:
        NormalizationError: if sum c_i^2 differs from 1 by more than 1e-12
        NegativeCoefficient: if any c_i < 0

    Returns:
        SchmidtState: the state
    """
    return SchmidtState(coeffs)


def state_from_two_coeffs(c0: float, c1: float) -> SchmidtState:
    """Builds the qutrit state (c0, c1, sqrt(1 - c0^2 - c1^2))

    Args:
        c0 (float): first Schmidt coefficient
        c1 (float): second Schmidt coefficient

    Raises:
        DomainError: if c0^2 + c1^2 > 1 or either coefficient is negative

    Returns:
        SchmidtState: the qutrit state
    """
    if c0 < 0 or c1 < 0:
        raise DomainError(f"Coefficients must be >= 0, got c0={c0}, c1={c1}")
    remainder = 1.0 - c0 * c0 - c1 * c1
    if remainder < -NORMALIZATION_TOL:
        raise DomainError(f"c0^2 + c1^2 = {c0 * c0 + c1 * c1} exceeds 1")
    c2 = float(np.sqrt(max(remainder, 0.0)))
    return SchmidtState((c0, c1, c2))


def maximally_entangled_state(dim: int = 3) -> SchmidtState:
    return SchmidtState(np.full(dim, 1.0 / np.sqrt(dim)))


def random_schmidt_state(rng: np.random.Generator, dim: int = 3) -> SchmidtState:
    """Draws Schmidt coefficients uniformly from the positive orthant of the
    unit sphere

    Args:
        rng (np.random.Generator): the random generator
        dim (int, optional): the local dimension. Defaults to 3.

    Returns:
        SchmidtState: a random state
    """
    raw = np.abs(rng.normal(size=dim))
    return SchmidtState(raw / np.linalg.norm(raw))
