"""The analysis report assembled from measured count matrices."""

import attr
from typing import Tuple
import numpy as np

from py_qutrit_correlations.distributions import EstimateWithError
from py_qutrit_correlations.entanglement import DeviationReport, deviation_from_measures
from py_qutrit_correlations.errors import DomainError
from py_qutrit_correlations.estimators import CertificationResult, certify_by_pcc_sum
from py_qutrit_correlations.photon_sim import PipelineEstimates

import logging

logger = logging.getLogger(__name__)

REPORT_TOL = 1e-9


@attr.s(frozen=True)
class Provenance:
    """Where a report came from

    Args:
        input_files (Tuple[str, ...]): the count-matrix files analyzed
        config_hash (str): SHA-256 of the effective configuration
    """

    input_files: Tuple[str, ...] = attr.ib(converter=lambda v: tuple(str(x) for x in v))
    config_hash: str = attr.ib(validator=attr.validators.instance_of(str))


@attr.s(frozen=True)
class AnalysisReport:
    """Entanglement estimates recovered from measured coincidences

    The deviations are always those of the report's own eof_from_mi and
    n_from_pcc means.

    Args:
        n_from_pcc (EstimateWithError): N from the focal-plane PCC
        n_from_mp (EstimateWithError): N from the conjugate-basis MP
        eof_from_mi (EstimateWithError): E from the image-plane MI
        pcc_sigma_z (EstimateWithError): image-plane PCC
        certification (CertificationResult): |C_z| + |C_x| > 1 test
        deviations (DeviationReport): Q_E, Q_N and Delta Q
        provenance (Provenance): inputs and configuration hash
    """

    n_from_pcc: EstimateWithError = attr.ib()
    n_from_mp: EstimateWithError = attr.ib()
    eof_from_mi: EstimateWithError = attr.ib()
    pcc_sigma_z: EstimateWithError = attr.ib()
    certification: CertificationResult = attr.ib()
    deviations: DeviationReport = attr.ib()
    provenance: Provenance = attr.ib()

    @deviations.validator
    def _check_deviations(self, attribute, value):
        expected = deviation_from_measures(self.eof_from_mi.mean, self.n_from_pcc.mean)
        if not np.allclose(
            attr.astuple(value), attr.astuple(expected), atol=REPORT_TOL, rtol=0
        ):
            raise DomainError(
                f"Deviations {value} do not follow from E={self.eof_from_mi.mean}, "
                f"N={self.n_from_pcc.mean}"
            )


def build_report(estimates: PipelineEstimates, provenance: Provenance) -> AnalysisReport:
    """
    Adds certification and deviations to pipeline estimates.

    Args:
        estimates (PipelineEstimates): repeat statistics from count matrices
        provenance (Provenance): inputs and configuration hash

    Returns:
        AnalysisReport: the report
    """
    certification = certify_by_pcc_sum(
        estimates.pcc_sigma_z.mean, estimates.n_from_pcc.mean
    )
    deviations = deviation_from_measures(
        estimates.eof_from_mi.mean, estimates.n_from_pcc.mean
    )
    return AnalysisReport(
        n_from_pcc=estimates.n_from_pcc,
        n_from_mp=estimates.n_from_mp,
        eof_from_mi=estimates.eof_from_mi,
        pcc_sigma_z=estimates.pcc_sigma_z,
        certification=certification,
        deviations=deviations,
        provenance=provenance,
    )


def _estimate_row(name: str, est: EstimateWithError) -> str:
    return f"{name:<16}{est.mean:>10.4f}{est.std:>10.4f}{est.n_samples:>6d}"


def format_report_table(report: AnalysisReport) -> str:
    """Human-readable table, numbers to 4 decimals"""
    cert = report.certification
    dev = report.deviations
    lines = [
        f"{'measure':<16}{'mean':>10}{'std':>10}{'n':>6}",
        _estimate_row("N (PCC)", report.n_from_pcc),
        _estimate_row("N (MP)", report.n_from_mp),
        _estimate_row("EOF (MI)", report.eof_from_mi),
        _estimate_row("PCC sigma_z", report.pcc_sigma_z),
        "",
        f"|C_z| + |C_x| = {cert.pcc_sum:.4f} (threshold {cert.threshold:.4f}): "
        + ("entangled" if cert.certified else "not certified"),
        f"Q_E = {dev.q_e:.4f}%  Q_N = {dev.q_n:.4f}%  Delta Q = {dev.delta_q:.4f}%",
    ]
    return "\n".join(lines)
