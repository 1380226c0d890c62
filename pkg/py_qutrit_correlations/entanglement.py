"""Negativity and entanglement of formation of pure Schmidt states, the maps
from measured correlators back to these measures, and the comparison of the
two measures through their percentage deviations from the maximally
entangled state.
"""

import attr
import itertools
from typing import List, Sequence, Tuple
import numpy as np
from scipy.optimize import minimize, minimize_scalar  # type: ignore
from scipy.special import xlogy  # type: ignore
from scipy.stats import entropy  # type: ignore

from py_qutrit_correlations.errors import BoundaryError, DimensionError, DomainError
from py_qutrit_correlations.states import SchmidtState
from py_qutrit_correlations.utils.matrix_utils import (
    density_matrix,
    partial_trace_b,
    partial_transpose,
    trace_norm,
    von_neumann_entropy,
)

import logging

logger = logging.getLogger(__name__)

LOG2_3 = float(np.log2(3.0))
MEASURE_DOMAIN_TOL = 1e-9
MONOTONICITY_TOL = 1e-9
# smallest coefficient the unrestricted scan may return
SCAN_MIN_COEFF = 1e-6

# (c0, c1) pairs tabulated in the deviation comparison
REFERENCE_COEFF_PAIRS: Tuple[Tuple[float, float], ...] = (
    (0.1, 0.1),
    (0.3, 0.8),
    (0.5774, 0.5774),
    (0.6, 0.6),
    (0.9, 0.3),
)


@attr.s(frozen=True)
class DeviationReport:
    """Percentage deviations of E and N from their maximally entangled values

    Args:
        e (float): entanglement of formation in bits
        n (float): negativity
        q_e (float): (log2(3) - E) / log2(3) * 100
        q_n (float): (1 - N) * 100
        delta_q (float): |q_e - q_n|
    """

    e: float = attr.ib(converter=float)
    n: float = attr.ib(converter=float)
    q_e: float = attr.ib(converter=float)
    q_n: float = attr.ib(converter=float)
    delta_q: float = attr.ib(converter=float)

    def __attrs_post_init__(self):
        values = (self.e, self.n, self.q_e, self.q_n, self.delta_q)
        assert all(np.isfinite(v) for v in values), f"Non-finite deviation {values}"


@attr.s(frozen=True)
class MeasureGradient:
    """Partial derivatives of E and N in c0 and c1, with c2 dependent"""

    d_e_dc0: float = attr.ib()
    d_e_dc1: float = attr.ib()
    d_n_dc0: float = attr.ib()
    d_n_dc1: float = attr.ib()


def _check_qutrit(state: SchmidtState) -> None:
    if state.dim != 3:
        raise DimensionError(
            f"Closed-form negativity is for qutrits, got dimension {state.dim}"
        )


def _negativity_from_coeffs(c0, c1, c2):
    return c0 * c1 + c1 * c2 + c0 * c2


def _eof_from_coeffs(c0, c1, c2):
    probs = [c0**2, c1**2, c2**2]
    return -sum(xlogy(p, p) for p in probs) / np.log(2.0)


def negativity(state: SchmidtState) -> float:
    """N = c0c1 + c1c2 + c0c2, normalized so the maximally entangled qutrit
    state scores 1. Equal to (||rho^{T_B}||_1 - 1) / 2.

    Args:
        state (SchmidtState): a qutrit state

    Raises:
        DimensionError: for d != 3

    Returns:
        float: N in [0, 1]
    """
    _check_qutrit(state)
    return float(_negativity_from_coeffs(*state.coeffs))


def eof(state: SchmidtState) -> float:
    """Entanglement of formation -sum_i c_i^2 log2 c_i^2 in bits (any d)"""
    return float(entropy(state.probabilities, base=2))


def negativity_partial_transpose(state: SchmidtState) -> float:
    """(||rho^{T_B}||_1 - 1) / 2 from the full density matrix (any d)"""
    d = state.dim
    rho = density_matrix(state.vector)
    return (trace_norm(partial_transpose(rho, d, d)) - 1.0) / 2.0


def entanglement_entropy(state: SchmidtState) -> float:
    """Von Neumann entropy of the numerically reduced density matrix, in bits"""
    d = state.dim
    rho_a = partial_trace_b(density_matrix(state.vector), d, d)
    return von_neumann_entropy(rho_a)


def negativity_from_pcc(pcc_magnitude: float) -> float:
    """N = |C_A1B1| for sigma_x measured on both sides

    Raises:
        DomainError: outside [0, 1]
    """
    if pcc_magnitude < 0 or pcc_magnitude > 1.0 + MEASURE_DOMAIN_TOL:
        raise DomainError(f"|PCC| = {pcc_magnitude} lies outside [0, 1]")
    return float(min(pcc_magnitude, 1.0))


def negativity_from_mp(mp: float) -> float:
    """Inverts MP = (1 + 2N) / 3

    Args:
        mp (float): mutual predictability in the conjugate sigma_x setting

    Raises:
        DomainError: for MP outside [1/3, 1]; an MP below 1/3 cannot come
            from a pure Schmidt state under this measurement

    Returns:
        float: N in [0, 1]
    """
    if mp < 1.0 / 3.0 - MEASURE_DOMAIN_TOL or mp > 1.0 + MEASURE_DOMAIN_TOL:
        raise DomainError(f"MP = {mp} lies outside [1/3, 1]")
    n = (3.0 * mp - 1.0) / 2.0
    return float(np.clip(n, 0.0, 1.0))


def deviation_from_measures(e: float, n: float) -> DeviationReport:
    """Deviation report for given E (bits) and N values"""
    q_e = (LOG2_3 - e) / LOG2_3 * 100.0
    q_n = (1.0 - n) * 100.0
    return DeviationReport(e, n, q_e, q_n, abs(q_e - q_n))


def deviation_report(state: SchmidtState) -> DeviationReport:
    """Deviation report for a qutrit state

    Args:
        state (SchmidtState): a qutrit state

    Returns:
        DeviationReport: E, N, Q_E, Q_N and their difference
    """
    return deviation_from_measures(eof(state), negativity(state))


def measure_gradients(state: SchmidtState) -> MeasureGradient:
    """Closed-form dE/dc0, dE/dc1, dN/dc0, dN/dc1 with c2 = sqrt(1 - c0^2 - c1^2)

        dE/dc0 = (2 / ln 2) c0 ln(c2^2 / c0^2)
        dN/dc0 = c1 + (1 - c0 c1 - c1^2 - 2 c0^2) / c2

    and the same with c0 and c1 exchanged.

    Args:
        state (SchmidtState): an interior qutrit state

    Raises:
        BoundaryError: when c0, c1 or c2 is zero

    Returns:
        MeasureGradient: the four derivatives
    """
    _check_qutrit(state)
    c0, c1, c2 = state.coeffs
    if min(c0, c1, c2) <= 0:
        raise BoundaryError(f"Gradients are undefined on the boundary {state.coeffs}")
    c2_sq = 1.0 - c0 * c0 - c1 * c1
    prefactor = 2.0 / np.log(2.0)
    return MeasureGradient(
        d_e_dc0=float(prefactor * c0 * np.log(c2_sq / (c0 * c0))),
        d_e_dc1=float(prefactor * c1 * np.log(c2_sq / (c1 * c1))),
        d_n_dc0=float(c1 + (1.0 - c0 * c1 - c1 * c1 - 2.0 * c0 * c0) / c2),
        d_n_dc1=float(c0 + (1.0 - c0 * c1 - c0 * c0 - 2.0 * c1 * c1) / c2),
    )


def find_nonmonotonic_pair(
    candidates: Sequence[SchmidtState],
) -> List[Tuple[SchmidtState, SchmidtState]]:
    """All pairs whose E ordering is opposite to their N ordering

    Args:
        candidates (Sequence[SchmidtState]): at least two qutrit states

    Returns:
        List[Tuple[SchmidtState, SchmidtState]]: the non-monotonic pairs, in
        candidate order
    """
    assert len(candidates) >= 2, "Need at least two candidates"
    measures = [(eof(s), negativity(s)) for s in candidates]
    pairs = []
    for i, j in itertools.combinations(range(len(candidates)), 2):
        d_e = measures[i][0] - measures[j][0]
        d_n = measures[i][1] - measures[j][1]
        if d_e * d_n < 0 and min(abs(d_e), abs(d_n)) > MONOTONICITY_TOL:
            pairs.append((candidates[i], candidates[j]))
    return pairs


def _delta_q(c0, c1):
    """Vectorized Delta Q over coefficient arrays on the open simplex"""
    c2 = np.sqrt(np.clip(1.0 - c0**2 - c1**2, 0.0, None))
    e = _eof_from_coeffs(c0, c1, c2)
    n = _negativity_from_coeffs(c0, c1, c2)
    return np.abs((LOG2_3 - e) / LOG2_3 * 100.0 - (1.0 - n) * 100.0)


def _grid_axis(grid_step: float) -> np.ndarray:
    if not 0 < grid_step <= 0.01:
        raise DomainError(f"grid_step must be in (0, 0.01], got {grid_step}")
    n_steps = int(np.floor(1.0 / grid_step + 1e-9))
    return np.round(grid_step * np.arange(1, n_steps), 12)


def delta_q_grid(grid_step: float) -> np.ndarray:
    """Table of (c0, c1, E, N, Q_E, Q_N, Delta Q) over the open simplex

    Rows are ordered lexicographically in (c0, c1).

    Args:
        grid_step (float): spacing in (0, 0.01]

    Returns:
        np.ndarray: n x 7 array
    """
    axis = _grid_axis(grid_step)
    c0, c1 = np.meshgrid(axis, axis, indexing="ij")
    c0, c1 = c0.reshape(-1), c1.reshape(-1)
    inside = c0**2 + c1**2 < 1.0
    c0, c1 = c0[inside], c1[inside]
    c2 = np.sqrt(1.0 - c0**2 - c1**2)
    e = _eof_from_coeffs(c0, c1, c2)
    n = _negativity_from_coeffs(c0, c1, c2)
    q_e = (LOG2_3 - e) / LOG2_3 * 100.0
    q_n = (1.0 - n) * 100.0
    return np.column_stack([c0, c1, e, n, q_e, q_n, np.abs(q_e - q_n)])


def scan_max_delta_q(
    grid_step: float, symmetric: bool = True
) -> Tuple[float, float, float]:
    """Locates the largest Delta Q by a coarse grid and local refinement

    With symmetric=True the search runs along c0 = c1 and is refined by
    bounded golden-section (Brent) search between the neighbouring grid
    points. With symmetric=False the whole open simplex is
    gridded and the best cell refined with Nelder-Mead. The unrestricted
    supremum sits on the c0 = 0 (or c1 = 0) edge, outside the open simplex,
    so the refinement keeps every coefficient at or above SCAN_MIN_COEFF and
    the result approximates that boundary supremum. Ties on the grid go to
    the lexicographically smallest (c0, c1).

    Args:
        grid_step (float): grid spacing in (0, 0.01]
        symmetric (bool, optional): restrict to c0 = c1. Defaults to True.

    Returns:
        Tuple[float, float, float]: (c0, c1, Delta Q in percent)
    """
    if symmetric:
        axis = _grid_axis(grid_step)
        axis = axis[2.0 * axis**2 < 1.0]
        values = _delta_q(axis, axis)
        best = int(np.argmax(values))
        lo = axis[max(best - 1, 0)]
        hi = axis[min(best + 1, len(axis) - 1)]
        result = minimize_scalar(
            lambda c: -_delta_q(c, c),
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": 1e-10},
        )
        c = float(result.x) if -result.fun >= values[best] else float(axis[best])
        c0, c1 = c, c
    else:
        table = delta_q_grid(grid_step)
        best = int(np.argmax(table[:, 6]))
        start = table[best, :2]

        def _objective(x: np.ndarray) -> float:
            if np.sum(x**2) >= 1 or np.any(x < SCAN_MIN_COEFF):
                return 0.0
            return -float(_delta_q(x[0], x[1]))

        result = minimize(
            _objective,
            start,
            method="Nelder-Mead",
            options={"xatol": 1e-8, "fatol": 1e-10},
        )
        c0, c1 = (
            (float(result.x[0]), float(result.x[1]))
            if -result.fun >= table[best, 6]
            else (float(start[0]), float(start[1]))
        )
    value = float(_delta_q(c0, c1))
    logger.info(f"Max Delta Q {value:.4f}% at c0={c0:.4f}, c1={c1:.4f}")
    return c0, c1, value
