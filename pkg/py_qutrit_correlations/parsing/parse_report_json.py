import json
from pathlib import Path
from typing import Union
import attr

from py_qutrit_correlations.distributions import EstimateWithError
from py_qutrit_correlations.entanglement import DeviationReport
from py_qutrit_correlations.errors import ParseError, QutritCorrelationError
from py_qutrit_correlations.estimators import CertificationResult
from py_qutrit_correlations.report import AnalysisReport, Provenance
from py_qutrit_correlations.utils.data_utils import atomic_write_text

import logging

logger = logging.getLogger(__name__)

_FIELD_TYPES = {
    "n_from_pcc": EstimateWithError,
    "n_from_mp": EstimateWithError,
    "eof_from_mi": EstimateWithError,
    "pcc_sigma_z": EstimateWithError,
    "certification": CertificationResult,
    "deviations": DeviationReport,
    "provenance": Provenance,
}
assert set(_FIELD_TYPES) == {a.name for a in attr.fields(AnalysisReport)}


def report_to_dict(report: AnalysisReport) -> dict:
    return attr.asdict(report, retain_collection_types=False)


def report_to_json(report: AnalysisReport) -> str:
    return json.dumps(report_to_dict(report), indent=2) + "\n"


def save_report_json(report: AnalysisReport, filepath: Union[str, Path]) -> Path:
    path = atomic_write_text(filepath, report_to_json(report))
    logger.info(f"Saved report to {path}")
    return path


def _check_keys(data, expected, where: str) -> None:
    if not isinstance(data, dict):
        raise ParseError(f"{where} must be an object")
    unknown = sorted(set(data) - set(expected))
    missing = sorted(set(expected) - set(data))
    if unknown:
        raise ParseError(f"Unknown fields in {where}: {unknown}")
    if missing:
        raise ParseError(f"Missing fields in {where}: {missing}")


def report_from_dict(data: dict) -> AnalysisReport:
    """
    Rebuilds a report, rejecting unknown or missing fields at every level.

    Args:
        data (dict): parsed report JSON

    Raises:
        ParseError: for unknown or missing fields and values of the wrong type

    Returns:
        AnalysisReport: the report
    """
    _check_keys(data, _FIELD_TYPES, "report")
    fields = {}
    for name, cls in _FIELD_TYPES.items():
        _check_keys(data[name], [a.name for a in attr.fields(cls)], name)
        try:
            fields[name] = cls(**data[name])
        except QutritCorrelationError:
            raise
        except (ValueError, TypeError) as e:
            raise ParseError(f"Bad value in {name}: {e}")
    return AnalysisReport(**fields)


def read_report_json(filepath: Union[str, Path]) -> AnalysisReport:
    filepath = Path(filepath)
    try:
        data = json.loads(filepath.read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as e:
        raise ParseError(f"Cannot load report {filepath}: {e}")
    return report_from_dict(data)
