"""Monte Carlo coincidence counting for the two detector configurations.

Each cell of a count matrix is an independent Poisson variable, as each
detector setting is accumulated separately for a fixed time. The whole
state -> counts -> correlators -> measures chain can be run here and
compared against the closed forms.
"""

from typing import List, Tuple
import numpy as np
from attrs import define, field

from py_qutrit_correlations.bases import STANDARD_EIGENVALUES
from py_qutrit_correlations.distributions import (
    CountMatrix,
    EstimateWithError,
    JointDistribution,
)
from py_qutrit_correlations.estimators import (
    CONJUGATE_MATCHING,
    mutual_information,
    mutual_predictability,
    normalize_counts,
    pcc,
    repeat_statistics,
)
from py_qutrit_correlations.entanglement import negativity_from_mp, negativity_from_pcc
from py_qutrit_correlations.joint_probabilities import (
    joint_computational,
    joint_sigma_x_both,
)
from py_qutrit_correlations.states import SchmidtState
from py_qutrit_correlations.utils.attrib_utils import (
    half_open_probability_validator,
    integral_float_converter,
    int_validator,
    nonnegative_float_validator,
    positive_int_validator,
)

import logging, coloredlogs

logger = logging.getLogger(__name__)
field_styles = {
    "filename": {"color": "green"},
    "levelname": {"bold": True, "color": "black"},
    "name": {"color": "blue"},
}
coloredlogs.install(
    level="INFO",
    fmt="[%(filename)s:%(lineno)d] %(name)s %(levelname)s - %(message)s",
    field_styles=field_styles,
)

# sub-seed tags for the two planes
IMAGE_PLANE_TAG = 0
FOCAL_PLANE_TAG = 1


@define(frozen=True)
class SimConfig:
    """Counting model for one simulated experiment

    Args:
        total_coincidences (int): mean total counts per matrix
        n_repeats (int): matrices per configuration
        background_rate (float): fraction of uniform accidental coincidences
        seed (int): root seed; every matrix gets its own derived sub-seed
        accumulation_time (float): seconds per cell, recorded on the matrices
    """

    total_coincidences: int = field(
        default=100_000,
        converter=integral_float_converter,
        validator=positive_int_validator,
    )
    n_repeats: int = field(
        default=5, converter=integral_float_converter, validator=positive_int_validator
    )
    background_rate: float = field(
        default=0.0, validator=half_open_probability_validator
    )
    seed: int = field(default=0, converter=integral_float_converter, validator=int_validator)
    accumulation_time: float = field(
        default=90.0, validator=nonnegative_float_validator
    )


@define(frozen=True)
class PipelineEstimates:
    """Repeat statistics of the measures recovered from simulated counts

    Args:
        n_from_pcc (EstimateWithError): N from the sigma_x x sigma_x PCC
        n_from_mp (EstimateWithError): N from the conjugate-basis MP
        eof_from_mi (EstimateWithError): E from the computational-basis MI
        pcc_sigma_z (EstimateWithError): computational-basis PCC
    """

    n_from_pcc: EstimateWithError
    n_from_mp: EstimateWithError
    eof_from_mi: EstimateWithError
    pcc_sigma_z: EstimateWithError


def _expected_counts(dist: JointDistribution, cfg: SimConfig) -> np.ndarray:
    n_cells = dist.probs.size
    mixed = (1.0 - cfg.background_rate) * dist.probs + cfg.background_rate / n_cells
    return cfg.total_coincidences * mixed


def _sub_seed(cfg: SimConfig, tag: int, repeat_idx: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([cfg.seed, tag, repeat_idx])


def sample_count_matrix(
    dist: JointDistribution,
    cfg: SimConfig,
    rng: np.random.Generator = None,
) -> CountMatrix:
    """Draws one coincidence matrix with independent Poisson cells of mean
    total * ((1 - background) p_ij + background / d^2)

    Args:
        dist (JointDistribution): the exact joint distribution
        cfg (SimConfig): the counting model
        rng (np.random.Generator, optional): generator to draw from. Defaults
            to one seeded with cfg.seed.

    Returns:
        CountMatrix: the simulated counts
    """
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    counts = rng.poisson(_expected_counts(dist, cfg))
    return CountMatrix(counts, accumulation_time=cfg.accumulation_time)


def sample_count_matrices(
    dist: JointDistribution, cfg: SimConfig, tag: int
) -> List[CountMatrix]:
    """cfg.n_repeats matrices, the k-th drawn from sub-seed (seed, tag, k)"""
    return [
        sample_count_matrix(dist, cfg, np.random.default_rng(_sub_seed(cfg, tag, k)))
        for k in range(cfg.n_repeats)
    ]


def render_ideal_counts(dist: JointDistribution, total: int) -> CountMatrix:
    """Noise-free counts round(total * p_ij)"""
    return CountMatrix(np.round(total * dist.probs))


def simulate_plane_counts(
    state: SchmidtState, cfg: SimConfig
) -> Tuple[List[CountMatrix], List[CountMatrix]]:
    """Image-plane (computational) and focal-plane (sigma_x on both arms)
    count matrices for every repeat

    Focal-plane matrices are labelled by detector position, as recorded in
    the lab; the conjugate-basis outcome pairs are the cells in
    CONJUGATE_MATCHING.

    Args:
        state (SchmidtState): the qutrit state
        cfg (SimConfig): the counting model

    Returns:
        Tuple[List[CountMatrix], List[CountMatrix]]: (image, focal) matrices
    """
    image = sample_count_matrices(joint_computational(state), cfg, IMAGE_PLANE_TAG)
    focal = sample_count_matrices(joint_sigma_x_both(state), cfg, FOCAL_PLANE_TAG)
    return image, focal


def estimate_from_counts(
    image: List[CountMatrix], focal: List[CountMatrix], eigenvalues=STANDARD_EIGENVALUES
) -> PipelineEstimates:
    """Recovers N and E from matched lists of image/focal plane matrices

    Args:
        image (List[CountMatrix]): computational-basis matrices
        focal (List[CountMatrix]): sigma_x-basis matrices
        eigenvalues (Sequence[float], optional): eigenvalue per detector
            position. Defaults to (0, 1, -1).

    Raises:
        DegenerateVariance: if a PCC is undefined, e.g. for a product state

    Returns:
        PipelineEstimates: repeat statistics of every estimate
    """
    assert image and focal, "Need at least one matrix per plane"
    n_pcc, n_mp, e_mi, pcc_z = [], [], [], []
    for counts in image:
        dist = normalize_counts(counts)
        pcc_z.append(pcc(dist, eigenvalues, eigenvalues))
        e_mi.append(mutual_information(dist))
    for counts in focal:
        dist = normalize_counts(counts)
        n_pcc.append(negativity_from_pcc(abs(pcc(dist, eigenvalues, eigenvalues))))
        n_mp.append(negativity_from_mp(mutual_predictability(dist, CONJUGATE_MATCHING)))
    logger.debug(f"Per-matrix N from PCC {n_pcc}, from MP {n_mp}, E from MI {e_mi}")
    return PipelineEstimates(
        n_from_pcc=repeat_statistics(n_pcc),
        n_from_mp=repeat_statistics(n_mp),
        eof_from_mi=repeat_statistics(e_mi),
        pcc_sigma_z=repeat_statistics(pcc_z),
    )


def run_pipeline(state: SchmidtState, cfg: SimConfig) -> PipelineEstimates:
    """Simulates cfg.n_repeats matrices per plane and estimates N and E

    Args:
        state (SchmidtState): the qutrit state
        cfg (SimConfig): the counting model

    Returns:
        PipelineEstimates: the repeat statistics
    """
    logger.info(
        f"Simulating {cfg.n_repeats} x 2 matrices of ~{cfg.total_coincidences} "
        f"coincidences for c = {state.coeffs}"
    )
    image, focal = simulate_plane_counts(state, cfg)
    return estimate_from_counts(image, focal)
