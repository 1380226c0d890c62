"""Exact joint outcome distributions of a Schmidt state under local
projective measurements.

All probabilities follow the Born rule

    P(i, j) = |(<a_i| x <b_j|) |psi>|^2 = |sum_k c_k <a_i|k><b_j|k>|^2

for |psi> = sum_k c_k |k>|k>.
"""

import numpy as np

from py_qutrit_correlations.bases import Observable, QutritBasis
from py_qutrit_correlations.distributions import JointDistribution
from py_qutrit_correlations.errors import DimensionError
from py_qutrit_correlations.states import SchmidtState

import logging

logger = logging.getLogger(__name__)

# clipping threshold for round-off below zero in closed-form cells
_ROUNDOFF = 1e-12


def _check_qutrit(state: SchmidtState) -> None:
    if state.dim != 3:
        raise DimensionError(f"Expected a qutrit state, got dimension {state.dim}")


def _clip_roundoff(probs: np.ndarray) -> np.ndarray:
    most_negative = float(np.min(probs))
    if most_negative < -_ROUNDOFF:
        logger.warning(f"Clipping negative probability {most_negative}")
    return np.clip(probs, 0.0, None)


def _pairwise_overlap(state: SchmidtState) -> float:
    c0, c1, c2 = state.coeffs
    return c0 * c1 + c1 * c2 + c0 * c2


def joint_computational(state: SchmidtState) -> JointDistribution:
    """Both sides measured in the computational basis: diag(c_i^2)"""
    return JointDistribution(
        np.diag(state.probabilities), "computational", "computational"
    )


def joint_sigma_x_both(state: SchmidtState) -> JointDistribution:
    """Both sides measured in the generalized sigma_x basis

    The cells (b0,b0), (b1,b2), (b2,b1) hold (1 + 2s)/9 and the other six
    hold (1 - s)/9, with s = c0c1 + c1c2 + c0c2.

    Args:
        state (SchmidtState): a qutrit state

    Raises:
        DimensionError: for d != 3

    Returns:
        JointDistribution: the joint probabilities
    """
    _check_qutrit(state)
    s = _pairwise_overlap(state)
    correlated = (1.0 + 2.0 * s) / 9.0
    other = (1.0 - s) / 9.0
    probs = np.full((3, 3), other)
    for i, j in ((0, 0), (1, 2), (2, 1)):
        probs[i, j] = correlated
    return JointDistribution(_clip_roundoff(probs), "sigma_x", "sigma_x")


def joint_sigma_x_conjugate(state: SchmidtState) -> JointDistribution:
    """Generalized sigma_x on the first side, its complex conjugate on the
    second. Equal to joint_sigma_x_both with columns b_1 and b_2 swapped.

    Args:
        state (SchmidtState): a qutrit state

    Raises:
        DimensionError: for d != 3

    Returns:
        JointDistribution: the joint probabilities, correlated on the diagonal
    """
    both = joint_sigma_x_both(state)
    swapped = both.probs[:, [0, 2, 1]]
    return JointDistribution(swapped, "sigma_x", "conjugate_sigma_x")


def joint_general(
    state: SchmidtState, basis_a: QutritBasis, basis_b: QutritBasis
) -> JointDistribution:
    """Joint probabilities for arbitrary local bases

    Args:
        state (SchmidtState): the state
        basis_a (QutritBasis): measured on the first subsystem
        basis_b (QutritBasis): measured on the second subsystem

    Raises:
        DimensionError: if a basis dimension differs from the state dimension

    Returns:
        JointDistribution: the joint probabilities
    """
    for basis in (basis_a, basis_b):
        if basis.dim != state.dim:
            raise DimensionError(
                f"Basis of dimension {basis.dim} for a state of dimension {state.dim}"
            )
    # <b|k> is the conjugate of the k-th entry of |b>
    amplitudes = np.einsum(
        "k,ik,jk->ij", state.array, basis_a.vectors.conj(), basis_b.vectors.conj()
    )
    return JointDistribution(
        np.abs(amplitudes) ** 2, basis_a.label.value, basis_b.label.value
    )


def local_projection_probabilities(
    amplitudes: np.ndarray, basis: QutritBasis
) -> np.ndarray:
    """|<b_j|v>|^2 for a normalized single-photon vector v

    Args:
        amplitudes (np.ndarray): the local vector v
        basis (QutritBasis): the measurement basis

    Returns:
        np.ndarray: outcome probabilities in basis order
    """
    v = np.asarray(amplitudes, dtype=complex)
    assert v.shape == (basis.dim,), f"{v.shape} does not match dimension {basis.dim}"
    return np.abs(basis.vectors.conj() @ v) ** 2


def expectation_value(
    state: SchmidtState, observable_a: Observable, observable_b: Observable
) -> float:
    """<psi| A x B |psi>, evaluated from the operators"""
    psi = state.vector
    operator = np.kron(observable_a.matrix, observable_b.matrix)
    return float(np.real(psi.conj() @ operator @ psi))
