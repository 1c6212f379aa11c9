"""cli: literal parsing, record schema, exit codes, determinism, scan."""
import json
import os

import pytest

from qzeta.cli import parse_complex, parse_grid, parse_index, run

RECORD_KEYS = {"case_id", "inputs", "lhs", "rhs", "abs_diff", "error_estimate",
               "converged", "convention_note", "error"}


class TestParsing:
    def test_complex_forms(self):
        assert parse_complex("2.5") == 2.5
        assert parse_complex("4+0.5i") == 4 + 0.5j
        assert parse_complex("3-1i") == 3 - 1j
        assert parse_complex("-1.5e0+2i") == -1.5 + 2j

    def test_malformed(self):
        for bad in ("abc", "1+i", "2++3i", "1+2j"):
            with pytest.raises(ValueError):
                parse_complex(bad)

    def test_index_and_grid(self):
        assert parse_index("1,2") == (1 + 0j, 2 + 0j)
        assert parse_grid("0.3:0.8:3") == [0.3, 0.55, 0.8]
        assert parse_grid("0.5") == [0.5]


def run_cli(args, tmp_path, name="out.json"):
    path = tmp_path / name
    code = run(args + ["--output", str(path)])
    fmt = "csv" if name.endswith(".csv") else "json"
    if fmt == "json":
        records = [json.loads(line) for line in path.read_text().splitlines()]
    else:
        records = path.read_text().splitlines()
    return code, records


class TestCommands:
    def test_sum_formula_passes(self, tmp_path):
        code, recs = run_cli(["sum-formula", "--k", "5", "--r", "2", "--q", "0.5"],
                             tmp_path)
        assert code == 0
        assert len(recs) == 1
        assert recs[0]["abs_diff"] < 1e-10
        assert set(recs[0]) == RECORD_KEYS

    def test_eval_out_of_domain_is_status_2(self, tmp_path):
        code, recs = run_cli(["eval", "--index", "0.5,0.4", "--q", "0.5"], tmp_path)
        assert code == 2
        assert "out of convergence domain" in recs[0]["error"]

    def test_theorem3_pole_is_status_2(self, tmp_path):
        code, recs = run_cli(["theorem3", "--s", "2.0", "--q", "0.5"], tmp_path)
        assert code == 2
        assert "pole proximity" in recs[0]["error"]

    def test_theorem3_strip_value(self, tmp_path):
        code, recs = run_cli(["theorem3", "--s", "1.5", "--q", "0.5"], tmp_path)
        assert code == 0
        assert recs[0]["abs_diff"] < 1e-4

    def test_theorem4(self, tmp_path):
        code, recs = run_cli(["theorem4", "--b", "2", "--s", "4.5", "--q", "0.5"],
                             tmp_path)
        assert code == 0
        assert "recursion vs closed form" in recs[0]["convention_note"]

    def test_f_identity_verdict(self, tmp_path):
        code, recs = run_cli(["f-identity", "--D", "1", "--s", "6", "--d", "1",
                              "--q", "0.5"], tmp_path)
        assert code == 0
        assert "verdict: C" in recs[0]["convention_note"]

    def test_limit_with_reference(self, tmp_path):
        code, recs = run_cli(["limit", "--index", "1,2",
                              "--reference-terms", "200000"], tmp_path)
        assert code == 0
        assert recs[0]["rhs"] is not None
        assert recs[0]["abs_diff"] < 5e-4

    def test_usage_error_is_64(self):
        with pytest.raises(SystemExit) as exc:
            run(["eval", "--no-such-flag"])
        assert exc.value.code == 64

    def test_schema_stable_across_commands(self, tmp_path):
        _, a = run_cli(["eval", "--index", "3", "--q", "0.5"], tmp_path, "a.json")
        _, b = run_cli(["sum-formula", "--k", "3", "--r", "2", "--q", "0.5"],
                       tmp_path, "b.json")
        assert set(a[0]) == set(b[0]) == RECORD_KEYS

    def test_csv_header(self, tmp_path):
        code, lines = run_cli(["eval", "--index", "3", "--q", "0.5", "--format",
                               "csv"], tmp_path, "out.csv")
        assert code == 0
        assert lines[0].startswith("case_id,inputs,lhs_re,lhs_im,rhs_re,rhs_im,"
                                   "abs_diff,error_estimate,converged")


class TestDeterminismAndScan:
    def test_lemmas_reports_bound_defect(self, tmp_path):
        # the pointwise-bounds case fails by design (the stated bounds are
        # false on this grid; see test_analysis), so the suite exits 1 while
        # every other lemma case passes
        code, recs = run_cli(["lemmas", "--q", "0.5", "--seed", "77",
                              "--bound-samples", "200"], tmp_path)
        assert code == 1
        for r in recs:
            if "pointwise" in r["case_id"]:
                assert r["abs_diff"] > 0
                assert "cannot be met" in r["convention_note"]
            else:
                assert r["error"] is None and r["abs_diff"] < 1e-4

    def test_rerun_bit_identical(self, tmp_path):
        args = ["lemmas", "--q", "0.5", "--seed", "77", "--bound-samples", "200"]
        p1, p2 = tmp_path / "r1.json", tmp_path / "r2.json"
        assert run(args + ["--output", str(p1)]) == 1
        assert run(args + ["--output", str(p2)]) == 1
        assert p1.read_bytes() == p2.read_bytes()

    def test_scan_cross_product_sorted(self, tmp_path):
        code, recs = run_cli(["scan", "--scan-command", "theorem3",
                              "--s", "2.5:4.5:3", "--q", "0.3,0.8"], tmp_path)
        assert code == 0
        assert len(recs) == 6
        ids = [r["case_id"] for r in recs]
        assert ids == sorted(ids)

    def test_thread_cap_preserves_output(self, tmp_path, monkeypatch):
        args = ["scan", "--scan-command", "sum-formula", "--k", "5", "--r", "2",
                "--q", "0.5"]
        monkeypatch.setenv("QZETA_MAX_THREADS", "1")
        p1 = tmp_path / "serial.json"
        assert run(args + ["--output", str(p1)]) == 0
        monkeypatch.setenv("QZETA_MAX_THREADS", "4")
        p2 = tmp_path / "parallel.json"
        assert run(args + ["--output", str(p2)]) == 0
        assert p1.read_bytes() == p2.read_bytes()
