"""Statistical correlators of a joint outcome distribution: Pearson
correlation coefficient (PCC), mutual predictability (MP) and mutual
information (MI), plus repeat-run statistics and the PCC-sum test for
entanglement.
"""

import attr
from typing import Sequence, Tuple
import numpy as np
from scipy.stats import entropy  # type: ignore

from py_qutrit_correlations.bases import eigenvalue_array
from py_qutrit_correlations.distributions import (
    CountMatrix,
    EstimateWithError,
    JointDistribution,
)
from py_qutrit_correlations.errors import (
    DegenerateVariance,
    DimensionError,
    DomainError,
    MatchingIndexError,
)

import logging

logger = logging.getLogger(__name__)

VARIANCE_CUTOFF = 1e-15
PCC_DOMAIN_TOL = 1e-9
CERTIFICATION_THRESHOLD = 1.0

# under sigma_x on both sides, the conjugate-basis outcome pairs sit at these
# (signal, idler) cells
CONJUGATE_MATCHING: Tuple[Tuple[int, int], ...] = ((0, 0), (2, 1), (1, 2))
DIAGONAL_MATCHING: Tuple[Tuple[int, int], ...] = ((0, 0), (1, 1), (2, 2))


@attr.s(frozen=True)
class CertificationResult:
    """Outcome of the test |C_A1B1| + |C_A2B2| > 1

    Args:
        pcc_sum (float): the sum of PCC magnitudes
        certified (bool): whether the sum exceeds the threshold
        threshold (float): the separable-state bound
    """

    pcc_sum: float = attr.ib(converter=float)
    certified: bool = attr.ib()
    threshold: float = attr.ib(default=CERTIFICATION_THRESHOLD)

    @certified.validator
    def _check_consistent(self, attribute, value):
        if value != (self.pcc_sum > self.threshold):
            raise DomainError(
                f"certified={value} inconsistent with sum {self.pcc_sum}"
            )


def _check_eigenvalues(dist: JointDistribution, eigs: np.ndarray, side: str) -> None:
    if eigs.shape != (dist.dim,):
        raise DimensionError(
            f"{side} has {eigs.size} eigenvalues for dimension {dist.dim}"
        )


def pcc(
    dist: JointDistribution, eigs_a: Sequence[float], eigs_b: Sequence[float]
) -> float:
    """Pearson correlation coefficient of the observables with eigenvalues
    eigs_a (rows) and eigs_b (columns)

        C = (<AB> - <A><B>) / (sigma_A sigma_B)

    Args:
        dist (JointDistribution): the joint outcome probabilities
        eigs_a (Sequence[float]): eigenvalue of each row outcome
        eigs_b (Sequence[float]): eigenvalue of each column outcome

    Raises:
        DegenerateVariance: if either marginal variance is <= 1e-15

    Returns:
        float: the PCC in [-1, 1]
    """
    a = eigenvalue_array(eigs_a)
    b = eigenvalue_array(eigs_b)
    _check_eigenvalues(dist, a, "eigs_a")
    _check_eigenvalues(dist, b, "eigs_b")

    p_a = dist.row_marginal
    p_b = dist.col_marginal
    mean_a = float(p_a @ a)
    mean_b = float(p_b @ b)
    var_a = float(p_a @ (a - mean_a) ** 2)
    var_b = float(p_b @ (b - mean_b) ** 2)
    if var_a <= VARIANCE_CUTOFF or var_b <= VARIANCE_CUTOFF:
        raise DegenerateVariance(
            f"Marginal variances ({var_a}, {var_b}) leave the PCC undefined "
            f"for {dist.row_label} x {dist.col_label}"
        )

    covariance = float((a - mean_a) @ dist.probs @ (b - mean_b))
    value = covariance / np.sqrt(var_a * var_b)
    return float(np.clip(value, -1.0, 1.0))


def mutual_predictability(
    dist: JointDistribution, matching: Sequence[Tuple[int, int]]
) -> float:
    """Sum of the joint probabilities of the matched outcome pairs

    Args:
        dist (JointDistribution): the joint outcome probabilities
        matching (Sequence[Tuple[int, int]]): d (row, col) cells using every
            row and every column exactly once

    Raises:
        MatchingIndexError: for out-of-range or repeated rows/columns

    Returns:
        float: the MP in [0, 1]
    """
    d = dist.dim
    cells = [(int(r), int(c)) for r, c in matching]
    if len(cells) != d:
        raise MatchingIndexError(f"Matching needs {d} cells, got {len(cells)}")
    rows = [r for r, _ in cells]
    cols = [c for _, c in cells]
    if any(not 0 <= idx < d for idx in rows + cols):
        raise MatchingIndexError(f"Matching {cells} out of range for dimension {d}")
    if len(set(rows)) != d or len(set(cols)) != d:
        raise MatchingIndexError(f"Matching {cells} repeats a row or column")
    return float(sum(dist.probs[r, c] for r, c in cells))


def mutual_information(dist: JointDistribution) -> float:
    """Plug-in mutual information in bits, H(A) + H(B) - H(A, B)

    Cells with zero probability contribute nothing. No bias correction is
    applied.

    Args:
        dist (JointDistribution): the joint outcome probabilities

    Returns:
        float: the MI, between 0 and log2(d)
    """
    h_a = entropy(dist.row_marginal, base=2)
    h_b = entropy(dist.col_marginal, base=2)
    h_ab = entropy(dist.probs.reshape(-1), base=2)
    return float(max(h_a + h_b - h_ab, 0.0))


def normalize_counts(counts: CountMatrix) -> JointDistribution:
    """Divides every cell by the grand total

    Args:
        counts (CountMatrix): the coincidence counts

    Raises:
        EmptyMatrix: when the total is zero

    Returns:
        JointDistribution: the empirical joint distribution
    """
    counts.check_not_empty()
    return JointDistribution(counts.counts / counts.total, "signal", "idler")


def certify_by_pcc_sum(pcc1: float, pcc2: float) -> CertificationResult:
    """Entanglement test |C_1| + |C_2| > 1 for two complementary PCCs

    Args:
        pcc1 (float): PCC of the first observable pair
        pcc2 (float): PCC of the second observable pair

    Raises:
        DomainError: if either |PCC| exceeds 1

    Returns:
        CertificationResult: the sum and verdict
    """
    for value in (pcc1, pcc2):
        if abs(value) > 1.0 + PCC_DOMAIN_TOL:
            raise DomainError(f"PCC {value} lies outside [-1, 1]")
    total = abs(pcc1) + abs(pcc2)
    return CertificationResult(total, total > CERTIFICATION_THRESHOLD)


def pcc_sum_bound(negativity: float) -> float:
    """|C_A1B1| + |C_A2B2| = 1 + N for a pure qutrit state"""
    return 1.0 + negativity


def repeat_statistics(values: Sequence[float]) -> EstimateWithError:
    """Mean and sample (n - 1) standard deviation of repeated estimates

    Args:
        values (Sequence[float]): one estimate per run

    Returns:
        EstimateWithError: the summary
    """
    arr = np.asarray(values, dtype=float)
    assert arr.ndim == 1 and arr.size >= 1, "Need at least one value"
    std = float(np.std(arr, ddof=1)) if arr.size > 1 else 0.0
    return EstimateWithError(float(np.mean(arr)), std, int(arr.size))
