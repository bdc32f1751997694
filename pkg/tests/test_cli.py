"""
End-to-end runs of the cslbg commands through the Typer test runner:
exit codes, CSV content, SVG structure and byte-identical reruns.
"""

import csv
import json
import xml.etree.ElementTree as ET

import pytest
from typer.testing import CliRunner

from app.main import app

SVG_NS = "{http://www.w3.org/2000/svg}"


@pytest.fixture(name="runner")
def fixture_runner():
    return CliRunner()


def invoke(runner, *args):
    return runner.invoke(app, [str(a) for a in args])


def read_rows(path):
    with open(path, encoding="utf-8") as fh:
        lines = [line for line in fh if not line.startswith("#")]
    return list(csv.DictReader(lines))


def polylines(path):
    return ET.parse(path).getroot().findall(f".//{SVG_NS}polyline")


def snapshot(directory):
    return {p.relative_to(directory): p.read_bytes() for p in sorted(directory.rglob("*")) if p.is_file()}


# -------------------- csl-heating --------------------


def test_csl_heating_cuore_gradient(runner):
    result = invoke(runner, "--json", "csl-heating", "--lambda", 1e-10, "--rc", 1e-7, "--preset", "cuore")
    assert result.exit_code == 0, result.output
    envelope = json.loads(result.stdout)
    assert envelope["status"] == "success"
    assert envelope["data"]["steady_gradient_K"] == pytest.approx(4.8e-3, rel=0.25)


def test_csl_heating_zero_lambda(runner):
    result = invoke(runner, "--json", "csl-heating", "--lambda", 0, "--rc", 1e-7)
    assert result.exit_code == 0
    data = json.loads(result.stdout)["data"]
    assert data["power_W"] == 0.0
    assert data["heating_W_per_kg"] == 0.0
    assert data["steady_gradient_K"] == 0.0


def test_csl_heating_prints_a_table(runner):
    result = invoke(runner, "csl-heating", "--lambda", 1e-10, "--rc", 1e-7)
    assert result.exit_code == 0
    assert "heating rate" in result.stdout


def test_missing_rc_is_a_usage_error(runner):
    assert invoke(runner, "csl-heating", "--lambda", 1e-10).exit_code == 2


def test_negative_lambda_is_a_domain_error(runner):
    result = invoke(runner, "csl-heating", "--lambda", -1, "--rc", 1e-7)
    assert result.exit_code == 4
    assert "error:" in result.stderr


def test_unknown_preset_is_a_validation_error(runner):
    result = invoke(runner, "--json", "csl-heating", "--lambda", 1e-10, "--rc", 1e-7, "--preset", "ge20")
    assert result.exit_code == 2
    assert json.loads(result.stdout)["status"] == "error"


def test_domain_error_in_json_mode_prints_an_error_envelope(runner):
    result = invoke(runner, "--json", "csl-heating", "--lambda", -1, "--rc", 1e-7)
    assert result.exit_code == 4
    envelope = json.loads(result.stdout)
    assert envelope["status"] == "error"
    assert envelope["code"] == 4
    assert envelope["data"] is None
    assert "error:" in result.stderr


# -------------------- gamma-scan --------------------


def test_gamma_scan_writes_scan_fit_and_plot(runner, tmp_path):
    out = tmp_path / "gamma"
    result = invoke(runner, "gamma-scan", "--t-max", 20, "--steps", 10, "--out", out)
    assert result.exit_code == 0, result.output

    rows = read_rows(out / "gamma_scan.csv")
    assert len(rows) == 10
    powers = [float(r["power_W"]) for r in rows]
    assert all(b < a for a, b in zip(powers, powers[1:]))

    fit = read_rows(out / "gamma_scan_fit.csv")[0]
    assert float(fit["slope"]) == pytest.approx(-0.24, abs=0.05)
    assert len(polylines(out / "gamma_scan.svg")) == 1


def test_gamma_scan_single_thickness_has_no_fit(runner, tmp_path):
    out = tmp_path / "gamma"
    result = invoke(runner, "gamma-scan", "--thicknesses", "5", "--out", out)
    assert result.exit_code == 0, result.output
    assert len(read_rows(out / "gamma_scan.csv")) == 1
    assert not (out / "gamma_scan_fit.csv").exists()


def test_gamma_scan_empty_thickness_list(runner, tmp_path):
    assert invoke(runner, "gamma-scan", "--thicknesses", "", "--out", tmp_path).exit_code == 2


def test_malformed_spectrum_is_a_data_format_error(runner, tmp_path):
    (tmp_path / "broken.csv").write_text(
        "e_low_MeV,e_high_MeV,flux_cm2_s,flux_err_cm2_s\n0.5,0.2,1.0,0.1\n", encoding="utf-8"
    )
    result = invoke(runner, "gamma-scan", "--spectrum", tmp_path / "broken.csv", "--out", tmp_path / "out")
    assert result.exit_code == 3
    assert "broken.csv:2" in result.stderr


# -------------------- muon-scan --------------------


def test_muon_scan_reproduces_depth_fits(runner, tmp_path):
    out = tmp_path / "muon"
    result = invoke(runner, "muon-scan", "--out", out)
    assert result.exit_code == 0, result.output

    expected = {"gran_sasso": (-0.50, -3.92), "standard_rock": (-0.49, -3.93)}
    for site, (slope, intercept) in expected.items():
        assert len(read_rows(out / f"muon_scan_{site}.csv")) == 15
        fit = read_rows(out / f"muon_scan_{site}_rate_fit.csv")[0]
        assert float(fit["slope"]) == pytest.approx(slope, abs=0.03)
        assert float(fit["intercept"]) == pytest.approx(intercept, abs=0.3)

    assert len(polylines(out / "muon_rate.svg")) == 2
    assert len(polylines(out / "muon_power.svg")) == 2


def test_muon_scan_is_byte_identical_on_rerun(runner, tmp_path):
    args = ["muon-scan", "--site", "gran_sasso", "--path-model", "monte_carlo", "--mc-samples", 20000, "--seed", 5]
    assert invoke(runner, *args, "--out", tmp_path / "a").exit_code == 0
    assert invoke(runner, *args, "--out", tmp_path / "b").exit_code == 0
    assert snapshot(tmp_path / "a") == snapshot(tmp_path / "b")


def test_muon_scan_zero_row_table(runner, tmp_path):
    (tmp_path / "empty.csv").write_text(
        "depth_kmwe,intensity_cm2_s_sr,intensity_err\n", encoding="utf-8"
    )
    result = invoke(runner, "muon-scan", "--site", tmp_path / "empty.csv", "--out", tmp_path / "out")
    assert result.exit_code == 3


def test_depth_outside_table_is_a_domain_error(runner, tmp_path):
    result = invoke(runner, "muon-scan", "--site", "gran_sasso", "--depths", "0.5", "--out", tmp_path)
    assert result.exit_code == 4


# -------------------- sensitivity and exclusion --------------------


def test_sensitivity_headline_numbers(runner, tmp_path):
    out = tmp_path / "sens"
    result = invoke(
        runner, "--json", "sensitivity", "--site", "gran_sasso", "--target", 1e-16, "--depths", "6.7", "--out", out
    )
    assert result.exit_code == 0, result.output
    site = json.loads(result.stdout)["data"]["sites"][0]
    assert 6.2 <= site["depth_for_target"] <= 6.6
    assert site["rows"][0]["lambda_det"] == pytest.approx(7.2e-17, rel=0.25)
    assert float(read_rows(out / "lambda_scan_gran_sasso.csv")[0]["lambda_per_s"]) == pytest.approx(
        7.2e-17, rel=0.25
    )


def test_sensitivity_margin_10(runner, tmp_path):
    result = invoke(
        runner, "--json", "sensitivity", "--site", "gran_sasso", "--target", 1e-16, "--margin", 10, "--out", tmp_path
    )
    assert result.exit_code == 0, result.output
    depth = json.loads(result.stdout)["data"]["sites"][0]["depth_for_target"]
    assert depth == pytest.approx(4.5, abs=0.3)


def test_unreachable_target_is_a_domain_error(runner, tmp_path):
    result = invoke(runner, "sensitivity", "--site", "gran_sasso", "--target", 1e-30, "--out", tmp_path)
    assert result.exit_code == 4
    assert "not reachable" in result.stderr


def test_exclusion_contours_and_overlay(runner, tmp_path):
    bound = tmp_path / "bound.csv"
    bound.write_text("# label=published\nr_c_m,lambda_per_s\n1e-8,1e-10\n1e-6,1e-6\n", encoding="utf-8")
    out = tmp_path / "excl"
    result = invoke(
        runner, "exclusion", "--site", "gran_sasso", "--depths", "3.7,6.5", "--overlay", bound, "--out", out
    )
    assert result.exit_code == 0, result.output

    rows = read_rows(out / "contour_gran_sasso_6.5kmwe.csv")
    assert len(rows) == 61
    shallow = read_rows(out / "contour_gran_sasso_3.7kmwe.csv")
    assert all(float(d["lambda_per_s"]) < float(s["lambda_per_s"]) for s, d in zip(shallow, rows))

    lines = polylines(out / "exclusion.svg")
    assert len(lines) == 3
    assert lines[-1].get("stroke-dasharray")


def test_bad_margin_is_a_validation_error(runner, tmp_path):
    assert invoke(runner, "exclusion", "--margin", -5, "--out", tmp_path).exit_code == 2


# -------------------- bolometer --------------------


def test_bolometer_trace_and_report(runner, tmp_path):
    out = tmp_path / "bolo"
    result = invoke(
        runner,
        "--json",
        "bolometer",
        "--thermal", "cuore",
        "--lambda", 1e-10,
        "--rate", 0.05,
        "--duration", 20,
        "--seed", 9,
        "--out", out,
    )
    assert result.exit_code == 0, result.output
    report = json.loads(result.stdout)["data"]
    assert report["recovered_gradient_K"] == pytest.approx(report["expected_gradient_K"], rel=0.05)
    assert report["events_detected"] == report["events_injected"]

    lines = (out / "trace.csv").read_text(encoding="utf-8").splitlines()
    assert "# seed=9" in lines
    assert len(read_rows(out / "trace.csv")) == 2001
    assert len(read_rows(out / "events.csv")) == report["events_injected"]


def test_bolometer_without_events_is_flat(runner, tmp_path):
    out = tmp_path / "bolo"
    result = invoke(runner, "bolometer", "--duration", 5, "--out", out)
    assert result.exit_code == 0, result.output
    temperatures = {r["temperature_K"] for r in read_rows(out / "trace.csv")}
    assert len(temperatures) == 1
    assert read_rows(out / "events.csv") == []


def test_bolometer_rate_from_depth(runner, tmp_path):
    result = invoke(
        runner, "--json", "bolometer", "--thermal", "upgraded", "--site", "gran_sasso", "--depth", 6.5,
        "--lambda", 1e-16, "--duration", 50, "--out", tmp_path,
    )
    assert result.exit_code == 0, result.output
    report = json.loads(result.stdout)["data"]
    assert report["recovered_gradient_K"] == pytest.approx(report["expected_gradient_K"], rel=0.05)
    assert report["pileup_probability"] < 1e-4


def test_bolometer_site_needs_depth(runner, tmp_path):
    assert invoke(runner, "bolometer", "--site", "gran_sasso", "--out", tmp_path).exit_code == 2


def test_bolometer_detector_follows_the_thermal_preset(runner, tmp_path):
    result = invoke(runner, "--json", "bolometer", "--thermal", "upgraded", "--duration", 5, "--out", tmp_path)
    assert result.exit_code == 0, result.output
    assert json.loads(result.stdout)["data"]["detector_preset"] == "cuore_upgraded"


def test_bolometer_rejects_a_detector_of_another_mass(runner, tmp_path):
    result = invoke(runner, "bolometer", "--thermal", "upgraded", "--preset", "cuore", "--out", tmp_path)
    assert result.exit_code == 2
    assert "does not match" in result.stderr


def test_bolometer_is_byte_identical_on_rerun(runner, tmp_path):
    args = ["bolometer", "--rate", 1, "--duration", 10, "--noise", "--seed", 3]
    assert invoke(runner, *args, "--out", tmp_path / "a").exit_code == 0
    assert invoke(runner, *args, "--out", tmp_path / "b").exit_code == 0
    assert snapshot(tmp_path / "a") == snapshot(tmp_path / "b")


# -------------------- fit --------------------


def test_fit_command(runner, tmp_path):
    source = tmp_path / "points.csv"
    source.write_text("x,y,y_err\n1,1e-3,0\n2,1e-4,0\n3,1e-5,0\n", encoding="utf-8")
    result = invoke(runner, "--json", "fit", source, "--out", tmp_path / "out")
    assert result.exit_code == 0, result.output
    envelope = json.loads(result.stdout)
    assert envelope["data"]["fit"]["slope"] == pytest.approx(-1.0)
    assert envelope["data"]["r_squared"] == pytest.approx(1.0)
    assert float(read_rows(tmp_path / "out" / "fit.csv")[0]["intercept"]) == pytest.approx(-2.0)


def test_fit_command_rejects_bad_rows(runner, tmp_path):
    source = tmp_path / "points.csv"
    source.write_text("x,y,y_err\n1,1e-3,0\n2,-1,0\n", encoding="utf-8")
    result = invoke(runner, "fit", source, "--out", tmp_path)
    assert result.exit_code == 3
    assert "points.csv:3" in result.stderr
