"""End-to-end tests of the command-line interface."""

import json
import math

import pytest

from mtsc_bounds.cli import main

LN2 = math.log(2.0)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_info(capsys):
    code, out, _ = run(capsys, "info")
    assert code == 0
    assert "casebook" in out


def test_repro_targets_pass(capsys):
    for target in ("toy", "appendix-c", "appendix-e"):
        code, out, _ = run(capsys, "repro", target)
        assert code == 0, out
        assert out.strip().endswith("PASS")


def test_repro_erasure_figure(tmp_path, capsys):
    out_path = tmp_path / "curve.csv"
    code, out, _ = run(capsys, "repro", "erasure-figure", "--out", str(out_path))
    assert code == 0
    assert out.strip().endswith("PASS")
    lines = out_path.read_text().strip().splitlines()
    assert lines[0] == "D,L,sum_rate_nats"
    assert len(lines) == 1 + 4 * 1000


def test_erasure_ceo_value(capsys):
    code, out, _ = run(capsys, "erasure-ceo", "--p", "0.5", "--L", "2", "--D", "0.6")
    assert code == 0
    payload = json.loads(out)
    assert payload["sum_rate_nats"] == pytest.approx(0.656283897, abs=1e-9)


def test_erasure_ceo_bits_flag(capsys):
    _, out_nats, _ = run(capsys, "erasure-ceo", "--p", "0.5", "--L", "2", "--D", "0.6")
    _, out_bits, _ = run(
        capsys, "erasure-ceo", "--p", "0.5", "--L", "2", "--D", "0.6", "--bits"
    )
    nats = json.loads(out_nats)["sum_rate_nats"]
    bits = json.loads(out_bits)["sum_rate_bits"]
    assert bits == pytest.approx(nats / LN2, abs=1e-9)


def test_erasure_ceo_curve_csv(capsys):
    code, out, _ = run(
        capsys, "erasure-ceo", "--p", "0.5", "--L", "1,2", "--curve", "5",
        "--format", "csv",
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "D,L,sum_rate_nats"
    assert len(lines) == 11


def test_erasure_ceo_rejects_bad_domain(capsys):
    code, _, err = run(capsys, "erasure-ceo", "--p", "0.5", "--L", "2", "--D", "0.1")
    assert code == 1
    assert "error" in err


def test_gaussian_ceo_min_sum_rate(capsys):
    code, out, _ = run(
        capsys, "gaussian-ceo", "--sigma2", "1", "--noise", "1,1", "--D", "0.5"
    )
    assert code == 0
    assert json.loads(out)["min_sum_rate_nats"] == pytest.approx(1.5 * LN2, abs=1e-8)


def test_gaussian_ceo_membership(capsys):
    common = ["gaussian-ceo", "--sigma2", "1", "--noise", "1,1", "--D", "0.5",
              "--witness", f"{0.5 * LN2},{0.5 * LN2}"]
    code, out, _ = run(capsys, *common, "--rates", f"{0.75 * LN2},{0.75 * LN2}")
    assert code == 0 and json.loads(out) == {"contains": True}
    code, out, _ = run(capsys, *common, "--rates", "0.4,0.4")
    assert code == 0 and json.loads(out) == {"contains": False}


def test_bounds_round_trip_through_files(tmp_path, capsys):
    prefix = str(tmp_path / "erasure")
    code, _, _ = run(
        capsys, "info", "--dump", "erasure", "--out", prefix,
        "--p", "0.5", "--L", "2", "--D", "0.6",
    )
    assert code == 0
    code, out, _ = run(
        capsys, "bounds",
        "--model", prefix + ".model.json",
        "--gamma", prefix + ".gamma.json",
        "--x", prefix + ".x.json",
        "--kind", "new-outer",
    )
    assert code == 0
    payload = json.loads(out)
    full = [row for row in payload["bounds"] if row["A"] == "0b11"][0]
    assert full["bound_nats"] == pytest.approx(0.656283897, abs=1e-9)
    assert payload["distortions"][0] == pytest.approx(0.6, abs=1e-9)


def test_bounds_markov_failure_exits_2(tmp_path, capsys):
    prefix = str(tmp_path / "appc")
    run(capsys, "info", "--dump", "appendix_c", "--out", prefix)
    code, _, err = run(
        capsys, "bounds",
        "--model", prefix + ".model.json",
        "--gamma", prefix + ".gamma.json",
        "--kind", "bt-inner",
    )
    assert code == 2
    assert "residual" in err


def test_bounds_csv_format(tmp_path, capsys):
    prefix = str(tmp_path / "toybt")
    run(capsys, "info", "--dump", "toy_bt_gamma", "--out", prefix)
    code, out, _ = run(
        capsys, "bounds",
        "--model", prefix + ".model.json",
        "--gamma", prefix + ".gamma.json",
        "--kind", "bt-inner",
        "--format", "csv",
    )
    assert code == 0
    assert out.splitlines()[0] == "subset,bound"


def test_malformed_json_exits_1_with_location(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"variables": [,]}')
    code, _, err = run(
        capsys, "bounds", "--model", str(bad), "--gamma", str(bad), "--kind", "bt-inner"
    )
    assert code == 1
    assert "line 1" in err and "column" in err


def test_missing_file_exits_1(capsys):
    code, _, err = run(
        capsys, "bounds", "--model", "/nonexistent.json",
        "--gamma", "/nonexistent.json", "--kind", "bt-inner",
    )
    assert code == 1
    assert "error" in err


def test_usage_error_exits_1(capsys):
    code, _, err = run(capsys, "bounds", "--kind", "bt-inner")
    assert code == 1


def test_optimize_deterministic_output(tmp_path, capsys):
    prefix = str(tmp_path / "er")
    run(capsys, "info", "--dump", "erasure", "--out", prefix,
        "--p", "0.5", "--L", "2", "--D", "0.6")
    args = [
        "optimize", "--model", prefix + ".model.json", "--caps", "0.6",
        "--cardinalities", "3,3", "--budget", "1500", "--seed", "4",
    ]
    code1, out1, _ = run(capsys, *args)
    code2, out2, _ = run(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2
    payload = json.loads(out1)
    assert payload["feasible"] is True
    assert payload["sum_rate_nats"] <= 0.68


def test_numeric_output_has_nine_significant_digits(capsys):
    _, out, _ = run(capsys, "erasure-ceo", "--p", "0.5", "--L", "2", "--D", "0.6")
    assert "0.656283897" in out


def test_optimize_honors_thread_cap(tmp_path, capsys, monkeypatch):
    prefix = str(tmp_path / "er")
    run(capsys, "info", "--dump", "erasure", "--out", prefix,
        "--p", "0.5", "--L", "2", "--D", "0.6")
    args = [
        "optimize", "--model", prefix + ".model.json", "--caps", "0.6",
        "--cardinalities", "3,3", "--budget", "1200", "--seed", "4",
    ]
    code1, out1, _ = run(capsys, *args)
    monkeypatch.setenv("MTSC_THREADS", "4")
    code2, out2, _ = run(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2  # deterministic merge regardless of worker count
