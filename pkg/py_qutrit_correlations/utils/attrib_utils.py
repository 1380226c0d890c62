from typing import Callable
import numpy as np

from py_qutrit_correlations.errors import DimensionError, DomainError


def is_dimension(instance, attribute, value) -> None:
    """
    Return validator for a local Hilbert space dimension.

    Args:
        value (int): value to validate

    Returns:
        None
    """
    if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
        raise DimensionError(f"{value} is not an int")
    if value < 2:
        raise DimensionError(f"Dimension {value} should be at least 2")


def probability_validator(instance, attribute, value):
    """
    Return validator for probability.

    Args:
        value (float): value to validate

    Returns:
        None
    """
    if not isinstance(value, (float, int)) or isinstance(value, bool):
        raise DomainError(f"{value} is not a float")
    if not 0 <= value <= 1:
        raise DomainError(f"Value {value} is not within range [0,1]")


def half_open_probability_validator(instance, attribute, value):
    """
    Return validator for a fraction in [0, 1).

    Args:
        value (float): value to validate

    Returns:
        None
    """
    probability_validator(instance, attribute, value)
    if value >= 1:
        raise DomainError(f"{attribute.name} must be below 1, got {value}")


def positive_float_validator(instance, attribute, value):
    """
    Return validator for strictly positive float.

    Args:
        value (float): value to validate

    Returns:
        None
    """
    if not isinstance(value, (float, int)) or isinstance(value, bool):
        raise DomainError(f"{value} is not a float (ints are also accepted)")
    if not value > 0:
        raise DomainError(f"{attribute.name} must be positive, got {value}")


def nonnegative_float_validator(instance, attribute, value):
    if not isinstance(value, (float, int)) or isinstance(value, bool):
        raise DomainError(f"{value} is not a float (ints are also accepted)")
    if value < 0:
        raise DomainError(f"{attribute.name} should not be negative, got {value}")


def positive_int_validator(instance, attribute, value) -> None:
    """
    Return validator for positive int.

    Args:
        value (int): value to validate

    Returns:
        None
    """
    if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
        raise DomainError(f"{value} is not an int")
    if value < 1:
        raise DomainError(f"{attribute.name} must be at least 1, got {value}")


def int_validator(instance, attribute, value) -> None:
    if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
        raise DomainError(f"{value} is not an int")


def make_square_matrix_validator(nonnegative: bool = False) -> Callable:
    """
    Return validator for a square 2D array.

    Args:
        nonnegative (bool): also require every entry to be >= 0

    Returns:
        Callable: validator
    """

    def square_matrix_validator(instance, attribute, value) -> None:
        if not isinstance(value, np.ndarray):
            raise ValueError(f"{value} is not a np.ndarray")

        if value.ndim != 2 or value.shape[0] != value.shape[1]:
            raise DimensionError(f"{attribute.name} is not square {value.shape}")

        if not np.all(np.isfinite(value)):
            raise DomainError(f"{attribute.name} has non-finite entries")

        if nonnegative and np.any(value < 0):
            raise DomainError(f"{attribute.name} has negative entries: {value}")

    return square_matrix_validator


def integral_float_converter(value):
    """Whole-valued floats such as 1e6 become ints; anything else is left for
    the validator to judge"""
    if isinstance(value, float) and value.is_integer():
        return int(value)
    return value
