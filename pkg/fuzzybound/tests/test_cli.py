import io
import json
import tempfile
import unittest
from contextlib import redirect_stdout
from pathlib import Path
from unittest.mock import patch

from fuzzybound.cli import main
from fuzzybound.config import load_config
from fuzzybound.exceptions import PreconditionError
from fuzzybound.ops import SUITE_REGISTRY
from fuzzybound.pipeline import EXIT_CONFIG, EXIT_FAILED, EXIT_OK, VERIFY_ALL, run, run_suites
from fuzzybound.reports import ANCHORS, SUITE_ANCHOR

SMALL_OP_NORM = """
suites:
  op-norm:
    fleet_size: 3
    pair_count: null
    s_values: [0.5, 2.0]
    s_grid: [0.5, 1.0, 2.0]
    sphere_samples: 16
    scaling_space: null
"""

# verify-all on reduced sample counts; every suite keeps at least one case per anchor
SMALL_VERIFY_ALL = """
samples:
  axioms: 200
  pairs: 200
  lemma: 50
  fleet: 5
suites:
  phi-check:
    grid_size: 200
  d-alpha:
    vectors: 20
  op-norm:
    fleet_size: 3
    pair_count: null
    s_values: [0.5, 2.0]
    s_grid: [0.5, 1.0, 2.0]
    sphere_samples: 16
    scaling_space: null
"""


def records(path):
    return [json.loads(line) for line in Path(path).read_text(encoding="utf-8").splitlines()]


class CliTestCase(unittest.TestCase):
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp = Path(self._tmp.name)

    def tearDown(self):
        self._tmp.cleanup()

    def main(self, *argv):
        with redirect_stdout(io.StringIO()), self.assertRaises(SystemExit) as cm:
            main(list(argv))
        return cm.exception.code


class CommandTests(CliTestCase):
    def test_same_seed_gives_identical_reports(self):
        first, second = self.tmp / "a.jsonl", self.tmp / "b.jsonl"
        self.assertEqual(self.main("tnorm-check", "--out", str(first)), EXIT_OK)
        self.assertEqual(self.main("tnorm-check", "--out", str(second)), EXIT_OK)
        self.assertEqual(first.read_bytes(), second.read_bytes())
        head = records(first)[0]
        self.assertEqual((head["tool"], head["command"], head["seed"]), ("fuzzybound", "tnorm-check", 7))

    def test_seed_override_reaches_records(self):
        out = self.tmp / "run.jsonl"
        self.main("phi-check", "--seed", "19", "--out", str(out))
        self.assertTrue(all(r["seed"] == 19 for r in records(out)))

    def test_counterexample_with_plots(self):
        out, plots = self.tmp / "ce.jsonl", self.tmp / "plots"
        self.assertEqual(self.main("counterexample", "--out", str(out), "--plot-dir", str(plots)), EXIT_OK)
        checks = {r["check_name"] for r in records(out)[1:]}
        self.assertIn("counterexample[step-domain]", checks)
        self.assertTrue((plots / "M_alpha_counterexample_reciprocal-domain.dat").exists())

    def test_precondition_cases_are_reported_not_failed(self):
        config = self.tmp / "small.yaml"
        config.write_text(SMALL_OP_NORM, encoding="utf-8")
        out = self.tmp / "norm.jsonl"
        self.assertEqual(run("op-norm", config, out, stream=io.StringIO()), EXIT_OK)
        unmet = [r["check_name"] for r in records(out) if r.get("verdict") == "precondition-unmet"]
        self.assertEqual(unmet, ["norm-preconditions[drastic_identity]", "norm-preconditions[step_doubling]"])

    def test_bad_config_exits_with_config_code(self):
        config = self.tmp / "bad.yaml"
        config.write_text("tolerance: -1\n", encoding="utf-8")
        self.assertEqual(self.main("tnorm-check", "--config", str(config), "--out", str(self.tmp / "x.jsonl")), EXIT_CONFIG)

    def test_negative_seed_exits_with_config_code(self):
        self.assertEqual(self.main("tnorm-check", "--seed", "-1", "--out", str(self.tmp / "x.jsonl")), EXIT_CONFIG)

    def test_verify_all_is_reproducible_and_covers_every_anchor(self):
        config = self.tmp / "small.yaml"
        config.write_text(SMALL_VERIFY_ALL, encoding="utf-8")
        first, second = self.tmp / "a.jsonl", self.tmp / "b.jsonl"
        code = run(VERIFY_ALL, config, first, stream=io.StringIO())
        self.assertEqual(run(VERIFY_ALL, config, second, stream=io.StringIO()), code)
        self.assertEqual(first.read_bytes(), second.read_bytes())
        rows = records(first)
        self.assertEqual(rows[0]["command"], VERIFY_ALL)
        anchors = {r["anchor"] for r in rows[1:]}
        self.assertNotIn(SUITE_ANCHOR, anchors)
        self.assertEqual(sorted(set(ANCHORS) - anchors), [])

    def test_bad_alpha_grid_exits_with_config_code(self):
        self.assertEqual(self.main("tnorm-check", "--alpha-grid", "0.5,1.5", "--out", str(self.tmp / "x.jsonl")), EXIT_CONFIG)

    def test_unknown_command_is_rejected_by_the_parser(self):
        with redirect_stdout(io.StringIO()), patch("sys.stderr", io.StringIO()), self.assertRaises(SystemExit) as cm:
            main(["nope"])
        self.assertEqual(cm.exception.code, 2)


class PipelineTests(unittest.TestCase):
    def test_unknown_subcommand(self):
        with self.assertRaises(ValueError):
            run_suites("nope", load_config())

    def test_raising_suite_becomes_fail_record(self):
        def boom(ctx):
            raise RuntimeError("boom")

        with patch.dict(SUITE_REGISTRY, {"tnorm-check": boom}), self.assertLogs("fuzzybound.pipeline", level="ERROR"):
            produced, _ = run_suites("tnorm-check", load_config())
        self.assertEqual([(r.check_name, r.verdict) for r in produced], [("tnorm-check", "fail")])
        self.assertIn("RuntimeError: boom", produced[0].values["error"])
        self.assertEqual(produced[0].anchor, SUITE_ANCHOR)

    def test_precondition_error_becomes_unmet_record(self):
        def unmet(ctx):
            raise PreconditionError("no NVI")

        with patch.dict(SUITE_REGISTRY, {"tnorm-check": unmet}):
            produced, _ = run_suites("tnorm-check", load_config())
        self.assertEqual(produced[0].verdict, "precondition-unmet")

    def test_verify_all_warns_about_uncovered_anchors(self):
        def only_tnorms(ctx):
            return [ctx.record("planted", "t-norm-axioms", "pass")]

        silent = {name: (lambda ctx: []) for name in SUITE_REGISTRY}
        silent["tnorm-check"] = only_tnorms
        with patch.dict(SUITE_REGISTRY, silent), self.assertLogs("fuzzybound.pipeline", level="WARNING") as logs:
            produced, _ = run_suites(VERIFY_ALL, load_config())
        self.assertEqual(len(produced), 1)
        self.assertTrue(any("uncovered" in line and "phi-axioms" in line for line in logs.output))

    def test_failed_record_sets_exit_code(self):
        def failing(ctx):
            return [ctx.record("planted", "t-norm-axioms", "fail")]

        with patch.dict(SUITE_REGISTRY, {"tnorm-check": failing}):
            code = run("tnorm-check", None, None, stream=io.StringIO())
        self.assertEqual(code, EXIT_FAILED)


if __name__ == "__main__":
    unittest.main()
