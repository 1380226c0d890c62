import numpy as np
import scipy.linalg as la  # type: ignore
from scipy.special import xlogy  # type: ignore
from typing import Sequence

import logging

logger = logging.getLogger(__name__)

# tolerance used when checking that a matrix is Hermitian / a state
_HERMITIAN_TOL = 1e-10


def _check_square(mat: np.ndarray) -> None:
    assert mat.ndim == 2, f"Matrix must be 2D, got shape {mat.shape}"
    assert mat.shape[0] == mat.shape[1], f"Matrix {mat.shape} is not square"


def _check_hermitian(mat: np.ndarray) -> None:
    _check_square(mat)
    assert np.allclose(
        mat, mat.conj().T, atol=_HERMITIAN_TOL
    ), "Matrix is not Hermitian"


def gram_matrix(vectors: np.ndarray) -> np.ndarray:
    """Returns the matrix of inner products <v_i|v_j> between the rows of
    vectors

    Args:
        vectors (np.ndarray): one vector per row

    Returns:
        np.ndarray: the Gram matrix
    """
    return vectors.conj() @ vectors.T


def schmidt_vector(coeffs: Sequence[float]) -> np.ndarray:
    """Returns the d^2 amplitude vector of sum_i c_i |i>|i>

    Args:
        coeffs (Sequence[float]): the Schmidt coefficients

    Returns:
        np.ndarray: the amplitude vector, ordered as |a>|b> -> a * d + b
    """
    c = np.asarray(coeffs, dtype=float)
    return np.diag(c).reshape(-1).astype(complex)


def density_matrix(ket: np.ndarray) -> np.ndarray:
    """Returns |psi><psi|

    Args:
        ket (np.ndarray): the state vector

    Returns:
        np.ndarray: the density matrix
    """
    assert ket.ndim == 1, f"ket must be 1D, got shape {ket.shape}"
    return np.outer(ket, ket.conj())


def partial_transpose(rho: np.ndarray, dim_a: int, dim_b: int) -> np.ndarray:
    """Transposes the second subsystem of a bipartite density matrix

    Args:
        rho (np.ndarray): the (dim_a*dim_b) x (dim_a*dim_b) density matrix
        dim_a (int): dimension of the first subsystem
        dim_b (int): dimension of the second subsystem

    Returns:
        np.ndarray: rho^{T_B}
    """
    _check_square(rho)
    assert rho.shape[0] == dim_a * dim_b, f"{rho.shape} != {dim_a}x{dim_b}"
    tensor = rho.reshape(dim_a, dim_b, dim_a, dim_b)
    return tensor.transpose(0, 3, 2, 1).reshape(dim_a * dim_b, dim_a * dim_b)


def partial_trace_b(rho: np.ndarray, dim_a: int, dim_b: int) -> np.ndarray:
    """Traces out the second subsystem

    Args:
        rho (np.ndarray): the bipartite density matrix
        dim_a (int): dimension of the first subsystem
        dim_b (int): dimension of the second subsystem

    Returns:
        np.ndarray: the reduced density matrix of the first subsystem
    """
    _check_square(rho)
    tensor = rho.reshape(dim_a, dim_b, dim_a, dim_b)
    return np.einsum("ijkj->ik", tensor)


def trace_norm(mat: np.ndarray) -> float:
    """Sum of the absolute eigenvalues of a Hermitian matrix"""
    _check_hermitian(mat)
    eigvals = la.eigvalsh(mat)
    return float(np.sum(np.abs(eigvals)))


def von_neumann_entropy(rho: np.ndarray, base: float = 2.0) -> float:
    """Returns -Tr(rho log rho)

    Args:
        rho (np.ndarray): a density matrix
        base (float, optional): the logarithm base. Defaults to 2 (bits).

    Returns:
        float: the entropy
    """
    _check_hermitian(rho)
    eigvals = la.eigvalsh(rho)
    if np.any(eigvals < -_HERMITIAN_TOL):
        logger.warning(f"Density matrix has negative eigenvalues {eigvals}")
    eigvals = np.clip(eigvals, 0.0, None)
    return float(-np.sum(xlogy(eigvals, eigvals)) / np.log(base))
