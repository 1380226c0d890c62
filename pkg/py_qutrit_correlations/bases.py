import attr
from enum import Enum
from typing import Sequence, Tuple
import numpy as np

from py_qutrit_correlations.errors import DimensionError, DomainError
from py_qutrit_correlations.utils.attrib_utils import make_square_matrix_validator
from py_qutrit_correlations.utils.matrix_utils import gram_matrix

ORTHONORMALITY_TOL = 1e-12

# eigenvalues assigned to the three outcomes, in basis order
STANDARD_EIGENVALUES: Tuple[float, float, float] = (0.0, 1.0, -1.0)


class BasisLabel(Enum):
    COMPUTATIONAL = "computational"
    GENERALIZED_SIGMA_X = "generalized_sigma_x"
    CONJUGATE_SIGMA_X = "conjugate_sigma_x"
    CUSTOM = "custom"


_CONJUGATE_LABELS = {
    BasisLabel.GENERALIZED_SIGMA_X: BasisLabel.CONJUGATE_SIGMA_X,
    BasisLabel.CONJUGATE_SIGMA_X: BasisLabel.GENERALIZED_SIGMA_X,
}


def _as_complex_array(value) -> np.ndarray:
    arr = np.array(value, dtype=complex)
    arr.setflags(write=False)
    return arr


@attr.s(frozen=True, eq=False)
class QutritBasis:
    """An orthonormal measurement basis

    Args:
        vectors (np.ndarray): d x d complex array, one basis vector per row
        label (BasisLabel): which of the named bases this is
    """

    vectors: np.ndarray = attr.ib(
        converter=_as_complex_array, validator=make_square_matrix_validator()
    )
    label: BasisLabel = attr.ib(default=BasisLabel.CUSTOM)

    @vectors.validator
    def _check_orthonormal(self, attribute, value):
        gram = gram_matrix(value)
        err = np.max(np.abs(gram - np.eye(value.shape[0])))
        if err > ORTHONORMALITY_TOL:
            raise DomainError(f"Basis vectors are not orthonormal (max error {err})")

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    def vector(self, idx: int) -> np.ndarray:
        return self.vectors[idx]

    def projector(self, idx: int) -> np.ndarray:
        v = self.vectors[idx]
        return np.outer(v, v.conj())


@attr.s(frozen=True, eq=False)
class Observable:
    """A local observable sum_i b_i |b_i><b_i|

    Args:
        basis (QutritBasis): the eigenbasis
        eigenvalues (Tuple[float, ...]): one real eigenvalue per basis vector
    """

    basis: QutritBasis = attr.ib(validator=attr.validators.instance_of(QutritBasis))
    eigenvalues: Tuple[float, ...] = attr.ib(
        converter=lambda v: tuple(float(x) for x in v)
    )

    @eigenvalues.validator
    def _check_eigenvalues(self, attribute, value):
        if len(value) != self.basis.dim:
            raise DimensionError(
                f"{len(value)} eigenvalues for a basis of dimension {self.basis.dim}"
            )

    @property
    def matrix(self) -> np.ndarray:
        """The Hermitian operator of this observable"""
        return sum(
            b * self.basis.projector(i) for i, b in enumerate(self.eigenvalues)
        )


def computational_basis(dim: int = 3) -> QutritBasis:
    return QutritBasis(np.eye(dim), BasisLabel.COMPUTATIONAL)


def generalized_sigma_x_basis(dim: int = 3) -> QutritBasis:
    """The Fourier basis |b_k> = d^{-1/2} sum_n omega^{kn} |n>, omega = e^{2 i pi/d}

    For d = 3 this is

        |b_0> = (|0> + |1> + |2>) / sqrt(3)
        |b_1> = (|0> + w|1> + w^2|2>) / sqrt(3)
        |b_2> = (|0> + w^2|1> + w|2>) / sqrt(3)

    Args:
        dim (int, optional): the local dimension. Defaults to 3.

    Returns:
        QutritBasis: the basis
    """
    k, n = np.meshgrid(np.arange(dim), np.arange(dim), indexing="ij")
    omega_powers = np.exp(2j * np.pi * ((k * n) % dim) / dim)
    return QutritBasis(omega_powers / np.sqrt(dim), BasisLabel.GENERALIZED_SIGMA_X)


def conjugate_basis(basis: QutritBasis) -> QutritBasis:
    """Entrywise complex conjugate of every basis vector

    For the generalized sigma_x basis, b_0* = b_0, b_1* = b_2 and b_2* = b_1.

    Args:
        basis (QutritBasis): the basis to conjugate

    Returns:
        QutritBasis: the conjugate basis
    """
    label = _CONJUGATE_LABELS.get(basis.label, basis.label)
    return QutritBasis(basis.vectors.conj(), label)


def standard_observable(basis: QutritBasis) -> Observable:
    """Observable with eigenvalues (0, 1, -1) in basis order"""
    if basis.dim != len(STANDARD_EIGENVALUES):
        raise DimensionError(f"Standard eigenvalues need d = 3, got {basis.dim}")
    return Observable(basis, STANDARD_EIGENVALUES)


def are_mutually_unbiased(
    basis_a: QutritBasis, basis_b: QutritBasis, tol: float = ORTHONORMALITY_TOL
) -> bool:
    """True when every overlap |<a_i|b_j>|^2 equals 1/d"""
    if basis_a.dim != basis_b.dim:
        return False
    overlaps = np.abs(basis_a.vectors.conj() @ basis_b.vectors.T) ** 2
    return bool(np.allclose(overlaps, 1.0 / basis_a.dim, atol=tol, rtol=0))


def eigenvalue_array(eigenvalues: Sequence[float]) -> np.ndarray:
    return np.asarray(eigenvalues, dtype=float)
