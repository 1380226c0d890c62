import json

import numpy as np
import pytest

from py_qutrit_correlations.cli import main
from py_qutrit_correlations.distributions import CountMatrix
from py_qutrit_correlations.errors import ConfigError, ParseError, ShapeError
from py_qutrit_correlations.parsing.parse_config_file import parse_config_file
from py_qutrit_correlations.parsing.parse_count_matrix import (
    parse_count_matrix_csv,
    save_count_matrix_csv,
)
from py_qutrit_correlations.parsing.parse_report_json import read_report_json
from py_qutrit_correlations.parsing.parse_table_files import parse_profile_csv


def _write(path, text):
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_count_matrix_round_trip(tmp_path):
    counts = CountMatrix(
        [[0.281, 0.024, 0.003], [0.006, 0.287, 0.014], [0.002, 0.006, 1.0 / 3.0]],
        accumulation_time=90.0,
        row_positions=(0.0, 202.5, 405.0),
        col_positions=(0.0, 202.5, 405.0),
    )
    path = save_count_matrix_csv(counts, tmp_path / "m.csv")
    assert parse_count_matrix_csv(path) == counts


def test_integer_counts_written_without_decimals(tmp_path):
    path = save_count_matrix_csv(CountMatrix(np.arange(9).reshape(3, 3)), tmp_path / "m.csv")
    assert "0,1,2" in path.read_text()
    assert parse_count_matrix_csv(path).is_integral


def test_count_matrix_shape_error(tmp_path):
    path = _write(tmp_path / "bad.csv", "1,2,3,4\n5,6,7,8\n")
    with pytest.raises(ShapeError):
        parse_count_matrix_csv(path)


@pytest.mark.parametrize("text", ["1,2,3\n4,x,6\n7,8,9\n", "1,2,3\n4,5\n7,8,9\n", "# only a comment\n"])
def test_count_matrix_parse_error(tmp_path, text):
    with pytest.raises(ParseError):
        parse_count_matrix_csv(_write(tmp_path / "bad.csv", text))


def test_analyze_published_tables(tmp_path, published_table_files):
    image, focal = published_table_files
    out = tmp_path / "report.json"
    code = main(["analyze", "--image", image, "--focal", focal, "--format", "json", "--out", str(out)])
    assert code == 0

    report = read_report_json(out)
    assert report.n_from_pcc.mean == pytest.approx(0.8437, abs=2e-3)
    assert report.n_from_mp.mean == pytest.approx(0.8604, abs=2e-3)
    assert report.eof_from_mi.mean == pytest.approx(1.2398, abs=2e-3)
    assert report.pcc_sigma_z.mean == pytest.approx(0.9173, abs=2e-3)
    assert report.certification.certified
    assert report.certification.pcc_sum == pytest.approx(1.761, abs=2e-3)
    assert report.deviations.q_n == pytest.approx((1 - report.n_from_pcc.mean) * 100)
    assert report.provenance.input_files == (image, focal)


def test_analyze_table_output(capsys, published_table_files):
    image, focal = published_table_files
    assert main(["analyze", "--image", image, "--focal", focal]) == 0
    out = capsys.readouterr().out
    assert "N (PCC)" in out
    assert "0.84" in out
    assert "entangled" in out


def test_report_rejects_unknown_fields(tmp_path, published_table_files):
    image, focal = published_table_files
    out = tmp_path / "report.json"
    main(["analyze", "--image", image, "--focal", focal, "--format", "json", "--out", str(out)])
    data = json.loads(out.read_text())
    data["extra"] = 1
    out.write_text(json.dumps(data))
    with pytest.raises(ParseError):
        read_report_json(out)

    del data["extra"]
    data["deviations"]["note"] = "x"
    out.write_text(json.dumps(data))
    with pytest.raises(ParseError):
        read_report_json(out)


def test_analyze_shape_error_exit_code(tmp_path, published_table_files):
    _, focal = published_table_files
    bad = _write(tmp_path / "bad.csv", "1,2,3,4\n5,6,7,8\n")
    assert main(["analyze", "--image", bad, "--focal", focal]) == 2


def test_certify_published_tables(capsys, published_table_files):
    image, focal = published_table_files
    assert main(["certify", "--image", image, "--focal", focal, "--format", "json"]) == 0
    result = json.loads(capsys.readouterr().out)
    assert result["certified"] is True
    assert result["pcc_sum"] == pytest.approx(1.761, abs=2e-3)
    assert result["threshold"] == 1.0


def test_certify_uniform_counts(tmp_path, capsys):
    uniform = _write(tmp_path / "u.csv", "1000,1000,1000\n1000,1000,1000\n1000,1000,1000\n")
    assert main(["certify", "--image", uniform, "--focal", uniform]) == 0
    assert "not certified" in capsys.readouterr().out


def test_certify_single_cell_is_degenerate(tmp_path):
    single = _write(tmp_path / "s.csv", "100,0,0\n0,0,0\n0,0,0\n")
    assert main(["certify", "--image", single, "--focal", single]) == 4


def test_simulate_writes_files_deterministically(tmp_path):
    args = ["simulate", "--c0", "0.5774", "--c1", "0.5774", "--total", "1e6", "--repeats", "5", "--seed", "7"]
    first, second = tmp_path / "a", tmp_path / "b"
    assert main(args + ["--out", str(first)]) == 0
    assert main(args + ["--out", str(second)]) == 0

    names = sorted(p.name for p in first.iterdir())
    assert len([n for n in names if n.endswith(".csv")]) == 10
    assert "manifest.json" in names
    for name in names:
        assert (first / name).read_bytes() == (second / name).read_bytes()

    manifest = json.loads((first / "manifest.json").read_text())
    assert manifest["config"]["simulation"]["total_coincidences"] == 1_000_000
    assert manifest["image_files"] == [f"image_{k:02d}.csv" for k in range(5)]
    counts = parse_count_matrix_csv(first / "focal_00.csv")
    assert counts.col_positions == pytest.approx((0.0, 202.5, 405.0))


def test_simulate_then_analyze(tmp_path):
    sim_dir = tmp_path / "sim"
    assert main(["simulate", "--c0", "0.3", "--c1", "0.8", "--seed", "1", "--out", str(sim_dir)]) == 0
    manifest = json.loads((sim_dir / "manifest.json").read_text())
    image = [str(sim_dir / n) for n in manifest["image_files"]]
    focal = [str(sim_dir / n) for n in manifest["focal_files"]]

    out = tmp_path / "report.json"
    args = ["analyze", "--image", *image, "--focal", *focal, "--format", "json", "--out", str(out)]
    assert main(args) == 0
    report = read_report_json(out)
    n_true = manifest["closed_form"]["negativity"]
    for est in (report.n_from_pcc, report.n_from_mp):
        assert est.n_samples == 5
        assert abs(est.mean - n_true) <= 3.0 * max(est.std, 1e-3)


def test_simulate_invalid_state_exit_code(tmp_path):
    assert main(["simulate", "--c0", "0.9", "--c1", "0.9", "--out", str(tmp_path / "x")]) == 3


def test_scan_json(capsys):
    assert main(["scan", "--step", "0.001", "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["maximum"]["delta_q"] == pytest.approx(12.148, abs=0.01)
    assert payload["maximum"]["c0"] == pytest.approx(0.1712, abs=2e-3)
    assert payload["rows"][1]["delta_q"] == pytest.approx(3.2540, abs=1e-3)


def test_scan_csv(tmp_path):
    out = tmp_path / "scan.csv"
    assert main(["scan", "--step", "0.01", "--format", "csv", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# max_delta_Q:")
    assert lines[1] == "c0,c1,E,N,Q_E,Q_N,delta_Q"


def test_profile_focal_csv(tmp_path):
    out = tmp_path / "profile.csv"
    assert main(["profile", "--plane", "focal", "--out", str(out)]) == 0
    marks = [ln for ln in out.read_text().splitlines() if ln.startswith("# eigen_positions_um:")]
    assert len(marks) == 1
    positions = [float(x) for x in marks[0].partition(":")[2].split(",")]
    assert positions == pytest.approx([0.0, 202.5, 405.0])
    profile = parse_profile_csv(out)
    assert len(profile.positions) == 134
    assert profile.fringe_period == pytest.approx(607.5)


def test_profile_image_defaults(capsys):
    assert main(["profile", "--plane", "image", "--c0", "1", "--c1", "0"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "# plane: image"
    assert "position_um,value" in lines


def test_config_file_overrides(tmp_path):
    config = _write(
        tmp_path / "cfg.json",
        json.dumps({"geometry": {"focal_length_f": 150.0}, "simulation": {"seed": 3}}),
    )
    run_config = parse_config_file(config)
    assert run_config.geometry.focal_length_f == 150.0
    assert run_config.simulation.seed == 3
    assert len(run_config.config_hash) == 64

    sim_dir = tmp_path / "sim"
    assert main(["simulate", "--config", config, "--seed", "9", "--repeats", "1", "--out", str(sim_dir)]) == 0
    manifest = json.loads((sim_dir / "manifest.json").read_text())
    assert manifest["config"]["simulation"]["seed"] == 9
    assert manifest["config"]["geometry"]["focal_length_f"] == 150.0


@pytest.mark.parametrize(
    "data",
    [{"optics": {}}, {"geometry": {"slit_count": 3}}, {"geometry": {"slit_width_a": -1.0}}],
)
def test_invalid_config(tmp_path, data):
    config = _write(tmp_path / "cfg.json", json.dumps(data))
    with pytest.raises(ConfigError):
        parse_config_file(config)
    assert main(["profile", "--config", config]) == 3


def test_count_matrix_not_utf8(tmp_path, published_table_files):
    _, focal = published_table_files
    bad = tmp_path / "bad.csv"
    bad.write_bytes(b"1,2,3\n4,\xff\xfe,6\n7,8,9\n")
    with pytest.raises(ParseError):
        parse_count_matrix_csv(bad)
    assert main(["analyze", "--image", str(bad), "--focal", focal]) == 2


def test_count_matrix_infinite_cell(tmp_path, published_table_files):
    _, focal = published_table_files
    bad = _write(tmp_path / "inf.csv", "1,2,3\n4,inf,6\n7,8,9\n")
    with pytest.raises(ParseError):
        parse_count_matrix_csv(bad)
    assert main(["certify", "--image", bad, "--focal", focal]) == 2


def test_other_readers_reject_undecodable_files(tmp_path):
    bad = tmp_path / "bad.bin"
    bad.write_bytes(b"\xff\xfe\x00{")
    with pytest.raises(ConfigError):
        parse_config_file(bad)
    with pytest.raises(ParseError):
        read_report_json(bad)
    with pytest.raises(ParseError):
        parse_profile_csv(bad)
    assert main(["profile", "--config", str(bad)]) == 3


def test_report_field_of_wrong_type(tmp_path, published_table_files):
    image, focal = published_table_files
    out = tmp_path / "report.json"
    main(["analyze", "--image", image, "--focal", focal, "--format", "json", "--out", str(out)])
    data = json.loads(out.read_text())
    data["n_from_pcc"]["mean"] = "abc"
    out.write_text(json.dumps(data))
    with pytest.raises(ParseError):
        read_report_json(out)


def test_config_accepts_whole_number_floats(tmp_path):
    config = _write(
        tmp_path / "cfg.json",
        json.dumps({"simulation": {"total_coincidences": 1e6, "n_repeats": 2.0, "seed": 4.0}}),
    )
    run_config = parse_config_file(config)
    assert run_config.simulation.total_coincidences == 1_000_000
    assert isinstance(run_config.simulation.total_coincidences, int)
    assert run_config.simulation.n_repeats == 2
    assert main(["simulate", "--config", config, "--out", str(tmp_path / "sim")]) == 0


def test_analyze_default_writes_json_and_prints_table(tmp_path, capsys, published_table_files):
    image, focal = published_table_files
    out = tmp_path / "report.json"
    assert main(["analyze", "--image", image, "--focal", focal, "--out", str(out)]) == 0
    assert "N (PCC)" in capsys.readouterr().out
    assert read_report_json(out).n_from_pcc.mean == pytest.approx(0.8437, abs=2e-3)


def test_analyze_default_to_stdout_has_table_then_json(capsys, published_table_files):
    image, focal = published_table_files
    assert main(["analyze", "--image", image, "--focal", focal]) == 0
    out = capsys.readouterr().out
    table, _, payload = out.partition("\n{")
    assert "entangled" in table
    assert json.loads("{" + payload)["certification"]["certified"] is True
