import io
import json
import tempfile
import unittest
from pathlib import Path

import numpy as np

from fuzzybound.reports import ANCHORS, SUITE_ANCHOR, ReportRecord, emit_report, header, missing_anchors, render_records, summary_table, write_plot_data


class RecordTests(unittest.TestCase):
    def test_invalid_verdict(self):
        with self.assertRaises(ValueError):
            ReportRecord("x", "t-norm-axioms", "maybe")

    def test_unknown_anchor_is_rejected(self):
        with self.assertRaises(ValueError):
            ReportRecord("x", "claim", "pass")
        self.assertEqual(ReportRecord("x", SUITE_ANCHOR, "fail").anchor, "suite")

    def test_record_fields_in_json(self):
        row = ReportRecord("tnorm-diagonal", "t-norm-diagonal", "pass").as_dict()
        self.assertEqual((row["check_name"], row["anchor"]), ("tnorm-diagonal", "t-norm-diagonal"))
        self.assertNotIn("check", row)

    def test_missing_anchors_keeps_table_order(self):
        covered = [ReportRecord("a", a, "pass") for a in ANCHORS[1:] if a != "level-infimum"]
        self.assertEqual(missing_anchors(covered), ["t-norm-axioms", "level-infimum"])
        self.assertEqual(missing_anchors([ReportRecord("a", a, "fail") for a in ANCHORS]), [])

    def test_non_finite_and_numpy_values(self):
        rec = ReportRecord("cert", "fuzzy-boundedness", "pass", values={"M": np.inf, "gap": np.nan, "hits": np.int64(3), "ok": np.bool_(True)})
        values = rec.as_dict()["values"]
        self.assertEqual(values, {"M": "inf", "gap": "nan", "hits": 3, "ok": True})


class RenderTests(unittest.TestCase):
    def test_empty_run_is_header_only(self):
        text = render_records([], header(7, "tnorm-check"))
        lines = text.splitlines()
        self.assertEqual(len(lines), 1)
        self.assertEqual(json.loads(lines[0])["record"], "header")
        self.assertEqual(json.loads(lines[0])["seed"], 7)

    def test_summary_counts(self):
        records = [ReportRecord("a", "t-norm-axioms", "pass"), ReportRecord("b", "t-norm-axioms", "fail"), ReportRecord("c", "t-norm-axioms", "precondition-unmet")]
        table = summary_table(records)
        self.assertTrue(table.startswith("=" * 80))
        self.assertIn("pass=1  fail=1  inconclusive=0  precondition-unmet=1", table)

    def test_emit_writes_file_and_plots(self):
        with tempfile.TemporaryDirectory() as tmp:
            out = Path(tmp) / "nested" / "run.jsonl"
            plots = Path(tmp) / "plots"
            stream = io.StringIO()
            text = emit_report([ReportRecord("a", "t-norm-axioms", "pass", seed=1)], header(1, "x"), out, stream, plots, {"curve": [(0.1, 1.0), (0.2, 2.0), (0.3, 4.0)]})
            self.assertEqual(out.read_text(encoding="utf-8"), text)
            self.assertIn("pass=1", stream.getvalue())
            data = np.loadtxt(plots / "curve.dat")
            self.assertEqual(data.shape, (3, 2))
            self.assertEqual(data[2, 1], 4.0)

    def test_plot_dir_is_created(self):
        with tempfile.TemporaryDirectory() as tmp:
            written = write_plot_data(Path(tmp) / "a" / "b", {"z": [(1.0, 2.0)]})
            self.assertEqual([p.name for p in written], ["z.dat"])


if __name__ == "__main__":
    unittest.main()
