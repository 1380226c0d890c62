"""Command-line entry point, installed as ``qutrit-corr``.

Subcommands:

    analyze   count-matrix CSVs -> N (PCC, MP), EOF (MI), certification, deviations
    simulate  Schmidt state -> simulated image/focal-plane count matrices
    scan      Delta Q grid over (c0, c1) and its maximum
    profile   image or focal-plane detection profile as CSV
    certify   |C_z| + |C_x| > 1 test on count matrices

Exit codes: 0 success, 2 unreadable or malformed input, 3 invalid values,
4 data leaving an estimator undefined.
"""

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence
import attr
import numpy as np

from py_qutrit_correlations.bases import STANDARD_EIGENVALUES
from py_qutrit_correlations.entanglement import (
    REFERENCE_COEFF_PAIRS,
    delta_q_grid,
    deviation_report,
    eof,
    negativity,
    scan_max_delta_q,
)
from py_qutrit_correlations.errors import DomainError, QutritCorrelationError
from py_qutrit_correlations.estimators import (
    certify_by_pcc_sum,
    normalize_counts,
    pcc,
    repeat_statistics,
)
from py_qutrit_correlations.optics import (
    eigen_positions,
    focal_coincidence_profile,
    image_plane_profile,
    sigma_z_operator_positions,
)
from py_qutrit_correlations.parsing.parse_config_file import RunConfig, parse_config_file
from py_qutrit_correlations.parsing.parse_count_matrix import (
    parse_count_matrices,
    save_count_matrix_csv,
)
from py_qutrit_correlations.parsing.parse_report_json import (
    report_to_json,
    save_report_json,
)
from py_qutrit_correlations.parsing.parse_table_files import (
    format_profile_csv,
    format_scan_csv,
    save_profile_csv,
    save_scan_csv,
)
from py_qutrit_correlations.photon_sim import (
    estimate_from_counts,
    simulate_plane_counts,
)
from py_qutrit_correlations.report import Provenance, build_report, format_report_table
from py_qutrit_correlations.states import state_from_two_coeffs
from py_qutrit_correlations.utils.data_utils import atomic_write_text, sha256_of_json

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

DEFAULT_C = float(1.0 / np.sqrt(3.0))
MANIFEST_NAME = "manifest.json"

# (x_min, x_max, step) in um for each plane
DEFAULT_SCAN = {
    "focal": (-2000.0, 2000.0, 30.0),
    "image": (-50.0, 250.0, 10.0),
}


def _count_type(text: str) -> int:
    """Accepts "100000" as well as "1e5" for a whole number of counts"""
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text} is not a number")
    if not value.is_integer():
        raise argparse.ArgumentTypeError(f"{text} is not a whole number")
    return int(value)


def _effective_config(args: argparse.Namespace) -> RunConfig:
    """Config file values overridden by any simulation flags given"""
    config = parse_config_file(args.config)
    overrides = {
        name: getattr(args, flag)
        for name, flag in (
            ("total_coincidences", "total"),
            ("n_repeats", "repeats"),
            ("seed", "seed"),
            ("background_rate", "background"),
        )
        if getattr(args, flag, None) is not None
    }
    if overrides:
        config = attr.evolve(config, simulation=attr.evolve(config.simulation, **overrides))
    return config


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        atomic_write_text(out, text if text.endswith("\n") else text + "\n")
        logger.info(f"Wrote {out}")


def cmd_analyze(args: argparse.Namespace) -> int:
    config = _effective_config(args)
    image = parse_count_matrices(args.image)
    focal = parse_count_matrices(args.focal)
    logger.info(f"Analyzing {len(image)} image-plane and {len(focal)} focal-plane matrices")
    estimates = estimate_from_counts(image, focal, args.eigenvalues)
    provenance = Provenance(
        input_files=list(args.image) + list(args.focal),
        config_hash=sha256_of_json(
            {"config": config.as_dict(), "eigenvalues": list(args.eigenvalues)}
        ),
    )
    report = build_report(estimates, provenance)

    # "both": table on stdout, JSON to --out (or after the table)
    if args.format in ("json", "both"):
        if args.out is None:
            if args.format == "both":
                _emit(format_report_table(report), None)
            sys.stdout.write(report_to_json(report))
        else:
            save_report_json(report, args.out)
            if args.format == "both":
                _emit(format_report_table(report), None)
    else:
        _emit(format_report_table(report), args.out)
    return 0


def cmd_certify(args: argparse.Namespace) -> int:
    image = parse_count_matrices(args.image)
    focal = parse_count_matrices(args.focal)
    eigs = args.eigenvalues
    pcc_z = repeat_statistics([pcc(normalize_counts(c), eigs, eigs) for c in image])
    pcc_x = repeat_statistics([pcc(normalize_counts(c), eigs, eigs) for c in focal])
    result = certify_by_pcc_sum(pcc_z.mean, pcc_x.mean)

    if args.format == "json":
        _emit(json.dumps(attr.asdict(result), indent=2), args.out)
    else:
        verdict = "entangled" if result.certified else "not certified"
        _emit(
            f"|C_z| + |C_x| = {result.pcc_sum:.4f} "
            f"(threshold {result.threshold:.4f}): {verdict}",
            args.out,
        )
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    state = state_from_two_coeffs(args.c0, args.c1)
    config = _effective_config(args)
    geom, sim = config.geometry, config.simulation

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    image, focal = simulate_plane_counts(state, sim)

    files = {"image": [], "focal": []}
    positions = {
        "image": sigma_z_operator_positions(geom),
        "focal": eigen_positions(geom),
    }
    for plane, matrices in (("image", image), ("focal", focal)):
        for k, counts in enumerate(matrices):
            counts = attr.evolve(
                counts, row_positions=positions[plane], col_positions=positions[plane]
            )
            name = f"{plane}_{k:02d}.csv"
            save_count_matrix_csv(counts, out_dir / name)
            files[plane].append(name)

    manifest = {
        "state": list(state.coeffs),
        "closed_form": {"negativity": negativity(state), "eof": eof(state)},
        "config": config.as_dict(),
        "config_hash": config.config_hash,
        "image_files": files["image"],
        "focal_files": files["focal"],
    }
    atomic_write_text(out_dir / MANIFEST_NAME, json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    logger.info(f"Wrote {len(image) + len(focal)} count matrices and {MANIFEST_NAME} to {out_dir}")
    return 0


def cmd_scan(args: argparse.Namespace) -> int:
    maximum = scan_max_delta_q(args.step, symmetric=not args.unrestricted)
    c0, c1, value = maximum

    if args.format == "csv":
        table = delta_q_grid(args.step)
        if args.out is None:
            sys.stdout.write(format_scan_csv(table, maximum))
        else:
            save_scan_csv(table, maximum, args.out)
        return 0

    rows = []
    for pair in REFERENCE_COEFF_PAIRS:
        report = deviation_report(state_from_two_coeffs(*pair))
        rows.append({"c0": pair[0], "c1": pair[1], **attr.asdict(report)})
    if args.format == "json":
        payload = {"maximum": {"c0": c0, "c1": c1, "delta_q": value}, "rows": rows}
        _emit(json.dumps(payload, indent=2), args.out)
        return 0

    lines = [f"{'c0':>8}{'c1':>8}{'E':>10}{'N':>10}{'Q_E':>10}{'Q_N':>10}{'dQ':>10}"]
    for row in rows:
        lines.append(
            f"{row['c0']:>8.4f}{row['c1']:>8.4f}{row['e']:>10.4f}{row['n']:>10.4f}"
            f"{row['q_e']:>10.4f}{row['q_n']:>10.4f}{row['delta_q']:>10.4f}"
        )
    lines.append(f"max Delta Q = {value:.4f}% at c0 = {c0:.4f}, c1 = {c1:.4f}")
    _emit("\n".join(lines), args.out)
    return 0


def cmd_profile(args: argparse.Namespace) -> int:
    state = state_from_two_coeffs(args.c0, args.c1)
    geom = parse_config_file(args.config).geometry
    x_min, x_max, step = DEFAULT_SCAN[args.plane]
    if args.range is not None:
        x_min, x_max = args.range
    if args.step is not None:
        step = args.step
    background = 0.0 if args.background is None else args.background

    if args.plane == "focal":
        profile = focal_coincidence_profile(state, geom, x_min, x_max, step, background)
        marks = eigen_positions(geom)
    else:
        if args.background is not None:
            raise DomainError("--background applies to the focal plane only")
        profile = image_plane_profile(state, geom, args.sigma, (x_min, x_max), step)
        marks = sigma_z_operator_positions(geom)

    if args.out is None:
        sys.stdout.write(format_profile_csv(profile, args.plane, marks))
    else:
        save_profile_csv(profile, args.out, args.plane, marks)
    return 0


def _add_matrix_inputs(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--image", nargs="+", required=True, help="Image-plane (sigma_z) count-matrix CSVs."
    )
    parser.add_argument(
        "--focal", nargs="+", required=True, help="Focal-plane (sigma_x) count-matrix CSVs."
    )
    parser.add_argument(
        "--eigenvalues",
        nargs=3,
        type=float,
        default=list(STANDARD_EIGENVALUES),
        help="Eigenvalue of each detector position, in order. Default: 0 1 -1.",
    )


def _add_config(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--config",
        "--geometry",
        dest="config",
        default=None,
        help="JSON file with 'geometry' and 'simulation' sections.",
    )


def _add_state(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--c0", type=float, default=DEFAULT_C, help="Schmidt coefficient c0.")
    parser.add_argument("--c1", type=float, default=DEFAULT_C, help="Schmidt coefficient c1.")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qutrit-corr",
        description="Correlators and entanglement measures of pure bipartite qutrits.",
    )
    parser.add_argument("--verbose", action="store_true", help="Log at DEBUG level.")
    subparsers = parser.add_subparsers(dest="command", required=True)

    analyze = subparsers.add_parser("analyze", help="Estimate N and EOF from count matrices.")
    _add_matrix_inputs(analyze)
    _add_config(analyze)
    analyze.add_argument(
        "--format",
        choices=["both", "json", "table"],
        default="both",
        help="both: table on stdout and JSON report to --out (or stdout).",
    )
    analyze.add_argument("--out", default=None, help="Output file (default stdout).")
    analyze.set_defaults(func=cmd_analyze)

    certify = subparsers.add_parser("certify", help="PCC-sum entanglement test.")
    _add_matrix_inputs(certify)
    certify.add_argument("--format", choices=["json", "table"], default="table")
    certify.add_argument("--out", default=None, help="Output file (default stdout).")
    certify.set_defaults(func=cmd_certify)

    simulate = subparsers.add_parser("simulate", help="Simulate count matrices for a state.")
    _add_state(simulate)
    _add_config(simulate)
    simulate.add_argument("--total", type=_count_type, default=None, help="Mean coincidences per matrix.")
    simulate.add_argument("--repeats", type=int, default=None, help="Matrices per plane.")
    simulate.add_argument("--seed", type=int, default=None, help="Root random seed.")
    simulate.add_argument("--background", type=float, default=None, help="Accidental fraction in [0, 1).")
    simulate.add_argument("--out", required=True, help="Output directory.")
    simulate.set_defaults(func=cmd_simulate)

    scan = subparsers.add_parser("scan", help="Delta Q grid and its maximum.")
    scan.add_argument("--step", type=float, default=0.001, help="Grid step in (0, 0.01].")
    scan.add_argument(
        "--unrestricted",
        action="store_true",
        help="Search the whole (c0, c1) simplex instead of the line c0 = c1.",
    )
    scan.add_argument("--format", choices=["csv", "json", "table"], default="table")
    scan.add_argument("--out", default=None, help="Output file (default stdout).")
    scan.set_defaults(func=cmd_scan)

    profile = subparsers.add_parser("profile", help="Detection profile as CSV.")
    _add_state(profile)
    _add_config(profile)
    profile.add_argument("--plane", choices=["image", "focal"], default="focal")
    profile.add_argument("--range", nargs=2, type=float, default=None, metavar=("X_MIN", "X_MAX"), help="Scan range in um.")
    profile.add_argument("--step", type=float, default=None, help="Sampling step in um.")
    profile.add_argument("--sigma", type=float, default=0.0, help="Image-plane detector width in um.")
    profile.add_argument("--background", type=float, default=None, help="Focal-plane accidental fraction.")
    profile.add_argument("--out", default=None, help="Output file (default stdout).")
    profile.set_defaults(func=cmd_profile)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.verbose:
        coloredlogs.set_level("DEBUG")
    try:
        return args.func(args)
    except QutritCorrelationError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
