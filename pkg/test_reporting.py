"""
Tests for the catalog regression, writers, sampling, sweeps and the CLI
"""

import csv
import io
import json
import sys

import pytest

import main
from ansatz_solvers import Family
from bundle_config import VOL_CP1, BaseFactor, BundleData, EpsilonChoice, builtin_catalog
from conftest import solved
from errors import ConfigError, NotInCatalog
from numerics import NumericsConfig
from table_rows import EXPECTED_ROWS, find_row
from reporting import (
    CSV_FIELDS,
    parse_m_range,
    render_table,
    run_catalog,
    run_single,
    sample_profile,
    sweep_m,
    worst_exit_code,
    write_csv,
    write_jsonl,
)


def test_embedded_rows():
    assert len(EXPECTED_ROWS) == 29
    counts = [sum(1 for r in EXPECTED_ROWS if r.bundle_name == name)
              for name in ("cp1_over_cp1", "cp1_over_cp2_q1", "cp1_over_cp2_q2", "cp1_over_cp1xcp2")]
    assert counts == [6, 6, 6, 11]
    assert len({row.key for row in EXPECTED_ROWS}) == 29


def test_printed_precision_tolerances():
    by_value = {row.constant_text: row.constant_atol for row in EXPECTED_ROWS}
    assert by_value["2.10308"] == pytest.approx(2e-5)
    assert by_value["101.0473989"] == pytest.approx(2e-7)
    assert by_value["0.341008"] == pytest.approx(2e-6)
    assert by_value["7.262220"] == pytest.approx(2e-6)


def test_find_row():
    eps = EpsilonChoice.of(1, -1)
    assert find_row("cp1_over_cp1xcp2", Family.QUASI_EINSTEIN, 3.0, eps).constant_text == "74.99986"
    assert find_row("cp1_over_cp1xcp2", Family.EINSTEIN_WW, None, eps).constant_text == "35.496485"
    assert find_row("cp1_over_cp1", Family.KRS, eps=EpsilonChoice.of(-1)).constant_text == "0.26381"
    assert find_row("cp1_over_cp1", Family.QUASI_EINSTEIN, 2.5, EpsilonChoice.of(-1)) is None


def test_full_catalog_passes():
    report = run_catalog(None, NumericsConfig())
    assert len(report.rows) == 29
    failed = [(r["bundle"], r["family"], r["m"], r["error"]) for r in report.rows if r["pass"] is not True]
    assert failed == []
    assert report.exit_code == 0
    assert report.settings["steps"] == 1500


def test_catalog_is_deterministic_across_workers():
    cfg = NumericsConfig()
    serial = run_catalog(["cp1_over_cp1"], cfg)
    threaded = run_catalog(["cp1_over_cp1"], cfg, workers=3)
    assert len(serial.rows) == 6
    assert serial.rows == threaded.rows


def test_coarse_quadrature_is_reported():
    report = run_catalog(["cp1_over_cp1"], NumericsConfig(steps=3))
    assert len(report.rows) == 6
    assert report.passed < 6
    assert report.exit_code in (2, 3)
    for row in report.rows:
        if row["pass"] is False and row["success"]:
            assert row["status"] == "mismatch"
            assert row["significand_deviation"] is not None


def test_unknown_catalog_name_is_rejected():
    with pytest.raises(NotInCatalog) as info:
        run_catalog(["nope"], NumericsConfig())
    assert info.value.exit_code == 1


def test_worst_exit_code():
    assert worst_exit_code([]) == 0
    assert worst_exit_code([0, 3, 0]) == 3
    assert worst_exit_code([0, 3, 2]) == 2
    assert worst_exit_code([3, 1, 2]) == 1


def test_run_single_records_failures(cfg):
    row = run_single(builtin_catalog("cp1_over_cp1"), "qe", cfg, m=None)
    assert not row["success"]
    assert row["exit_code"] == 1 and row["status"] == "validation"
    assert row["error"]

    row = run_single(builtin_catalog("cp1_over_cp1"), Family.EINSTEIN_WW, cfg)
    assert row["exit_code"] == 1


def test_run_single_without_table_row(cfg):
    bundle = BundleData((BaseFactor(n=1, p=2, q=-1, vol=VOL_CP1),), name="my_hirzebruch")
    row = run_single(bundle, Family.KRS, cfg)
    assert row["success"] and row["pass"] is None
    assert row["exit_code"] == 0
    reference = run_single(builtin_catalog("cp1_over_cp1"), Family.KRS, cfg)
    assert row["nu"] == reference["nu"]
    assert reference["pass"] is True


def test_run_single_mismatch(cfg):
    row = run_single(builtin_catalog("cp1_over_cp1"), Family.KRS, cfg, rtol_sig=1e-15)
    assert row["pass"] is False
    assert row["exit_code"] == 3


def test_csv_round_trip(cfg):
    rows = [run_single(builtin_catalog("cp1_over_cp1"), Family.KRS, cfg),
            run_single(builtin_catalog("cp1_over_cp1xcp2"), Family.QUASI_EINSTEIN, cfg,
                       eps=EpsilonChoice.of(1, -1), m=2)]
    stream = io.StringIO()
    write_csv(rows, stream)
    stream.seek(0)
    parsed = list(csv.DictReader(stream))
    assert list(parsed[0]) == CSV_FIELDS
    for original, back in zip(rows, parsed):
        assert float(back["constant_value"]) == original["constant_value"]
        assert float(back["nu"]) == original["nu"]
        assert float(back["significand"]) == original["significand"]
        assert int(back["exponent"]) == original["exponent"]
        assert back["pass"] == "true"
    assert parsed[1]["eps"] == "(1,-1)"
    assert parsed[0]["eps"] == ""


def test_jsonl_and_table(cfg):
    rows = [run_single(builtin_catalog("cp1_over_cp1"), Family.EINSTEIN_Z2, cfg)]
    stream = io.StringIO()
    write_jsonl(rows, stream, CSV_FIELDS)
    record = json.loads(stream.getvalue().splitlines()[0])
    assert list(record) == CSV_FIELDS
    assert record["nu"] == rows[0]["nu"]

    table = render_table(rows)
    assert table.splitlines()[0].split() == CSV_FIELDS
    assert f"{rows[0]['significand']:.7g}" in table


def test_sample_profile_endpoints():
    profile = solved(next(r for r in EXPECTED_ROWS if r.bundle_name == "cp1_over_cp1" and r.family is Family.KRS))
    samples = sample_profile(profile, 2)
    assert [s["s"] for s in samples] == [0.0, 4.0]
    assert samples[0]["alpha"] == 0.0
    assert abs(samples[1]["alpha"]) <= 1e-8
    assert samples[0]["beta_1"] == pytest.approx(2.0)
    assert list(samples[0]) == ["s", "alpha", "beta_1", "f"]
    with pytest.raises(ConfigError):
        sample_profile(profile, 1)


def test_sample_profile_z2_midpoint():
    profile = solved(next(r for r in EXPECTED_ROWS if r.bundle_name == "cp1_over_cp1"
                          and r.family is Family.EINSTEIN_Z2))
    samples = sample_profile(profile, 5)
    middle = samples[2]
    assert middle["s"] == pytest.approx(profile.constants.R)
    assert middle["alpha"] == pytest.approx(1.99472, abs=1e-4)
    assert samples[1]["alpha"] == pytest.approx(samples[3]["alpha"], abs=1e-9)


def test_sweep_decreasing(cfg):
    sweep = sweep_m(builtin_catalog("cp1_over_cp1"), EpsilonChoice.of(-1), parse_m_range("2:5"), cfg)
    assert sweep.monotonic == "decreasing"
    assert [r["family"] for r in sweep.rows] == ["qe"] * 4 + ["krs"]
    assert all(r["pass"] for r in sweep.rows)
    assert sweep.exit_code == 0


def test_sweep_increasing(cfg):
    sweep = sweep_m(builtin_catalog("cp1_over_cp1xcp2"), EpsilonChoice.of(1, -1), [2, 3, 4, 5], cfg)
    assert sweep.monotonic == "increasing"


def test_sweep_single_m(cfg):
    sweep = sweep_m(builtin_catalog("cp1_over_cp1"), EpsilonChoice.of(-1), [3.0], cfg)
    assert sweep.monotonic == "n/a"
    assert len(sweep.rows) == 2


def test_sweep_with_failed_m_has_no_verdict(cfg):
    sweep = sweep_m(builtin_catalog("cp1_over_cp1"), EpsilonChoice.of(-1), [1.0, 2.0, 3.0], cfg)
    assert sweep.monotonic == "n/a"
    assert not sweep.rows[0]["success"]
    assert [r["success"] for r in sweep.rows[1:]] == [True, True, True]
    assert sweep.exit_code == 1


def test_parse_m_range():
    assert parse_m_range("2:5") == [2.0, 3.0, 4.0, 5.0]
    assert parse_m_range("2.5,3") == [2.5, 3.0]
    with pytest.raises(ConfigError):
        parse_m_range("5:2")
    with pytest.raises(ConfigError):
        parse_m_range("a:b")


def test_cli_catalog_csv(tmp_path):
    out = tmp_path / "table1.csv"
    assert main.main(["--manifold", "cp1_over_cp1", "--format", "csv", "--out", str(out)]) == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == ",".join(CSV_FIELDS)
    assert len(lines) == 7


def test_cli_sample_jsonl(tmp_path):
    out = tmp_path / "krs.jsonl"
    code = main.main(["--manifold", "cp1_over_cp1", "--family", "krs", "--sample", "5",
                      "--format", "jsonl", "--out", str(out)])
    assert code == 0
    records = [json.loads(line) for line in out.read_text(encoding="utf-8").splitlines()]
    assert len(records) == 5
    assert records[0]["s"] == 0.0 and records[-1]["s"] == 4.0


def test_cli_exit_codes(tmp_path):
    out = str(tmp_path / "out.txt")
    assert main.main(["--manifold", "nope"]) == 1
    assert main.main(["--manifold", "cp1_over_cp1", "--family", "einstein_ww", "--out", out]) == 1
    assert main.main(["--manifold", "cp1_over_cp1", "--family", "krs", "--rtol", "1e-15", "--out", out]) == 3
    assert main.main(["--manifold", "cp1_over_cp1", "--family", "krs", "--rtol", "1e-15",
                      "--no-compare", "--out", out]) == 0
    assert main.main(["--family", "krs"]) == 1


def test_cli_bad_workers_env(monkeypatch):
    monkeypatch.setenv("ENTROPY_WORKERS", "many")
    assert main.main(["--manifold", "cp1_over_cp1"]) == 1
    monkeypatch.setenv("ENTROPY_WORKERS", "0")
    assert main.main(["--manifold", "cp1_over_cp1"]) == 1


def test_cli_unwritable_out(tmp_path):
    out = tmp_path / "missing" / "rows.csv"
    assert main.main(["--manifold", "cp1_over_cp1", "--format", "csv", "--out", str(out)]) == 1


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
