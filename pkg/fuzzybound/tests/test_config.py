import json
import tempfile
import unittest
from pathlib import Path

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from fuzzybound.config import RunConfig, load_config, merge_dicts, yaml_line_index
from fuzzybound.exceptions import ConfigError


class ConfigTestCase(unittest.TestCase):
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp = Path(self._tmp.name)

    def tearDown(self):
        self._tmp.cleanup()

    def write(self, name, text):
        path = self.tmp / name
        path.write_text(text, encoding="utf-8")
        return path


class DefaultsTests(ConfigTestCase):
    def test_packaged_defaults_load(self):
        cfg = load_config()
        self.assertEqual(cfg.seed, 7)
        self.assertEqual(cfg.alpha_grid[0], 0.1)
        self.assertIn("r2", cfg.spaces)
        self.assertEqual(cfg.operator("lift").matrix.shape, (3, 2))
        self.assertIs(cfg.space("r2"), cfg.space("r2"))
        self.assertEqual(cfg.sequences["alternating_r2"].expect, "diverges-witness")
        self.assertFalse(cfg.operator_sequences["identity_growth"].expect_cauchy)

    def test_user_file_merges_over_defaults(self):
        path = self.write("run.yaml", "seed: 11\nsuites:\n  op-norm:\n    fleet_size: 3\n")
        cfg = load_config(path)
        self.assertEqual(cfg.seed, 11)
        self.assertEqual(cfg.suite("op-norm")["fleet_size"], 3)
        self.assertEqual(cfg.suite("op-norm")["space"], "r2")
        self.assertEqual(cfg.source, str(path))

    def test_json_config(self):
        path = self.write("run.json", json.dumps({"seed": 3, "tolerance": 1e-8}))
        cfg = load_config(path)
        self.assertEqual((cfg.seed, cfg.tolerance), (3, 1e-8))

    def test_matrix_file_is_relative_to_the_config(self):
        self.write("doubling.txt", "2 0\n0 2\n")
        path = self.write("run.yaml", "operators:\n  doubling:\n    domain: r2\n    matrix_file: doubling.txt\n")
        np.testing.assert_array_equal(load_config(path).operator("doubling").matrix, 2.0 * np.eye(2))


class ErrorTests(ConfigTestCase):
    def test_bad_dimension_names_key_and_line(self):
        path = self.write("run.yaml", "seed: 1\nspaces:\n  r2:\n    dimension: 0\n")
        with self.assertRaises(ConfigError) as cm:
            load_config(path)
        self.assertEqual(cm.exception.key, "spaces.r2.dimension")
        self.assertEqual(cm.exception.line, 4)
        self.assertIn(f"{path}:4", str(cm.exception))

    def test_unknown_top_level_key(self):
        path = self.write("run.yaml", "colour: red\n")
        with self.assertRaises(ConfigError) as cm:
            load_config(path)
        self.assertEqual(cm.exception.key, "colour")

    def test_unknown_nested_key_names_key_and_line(self):
        path = self.write("run.yaml", "seed: 1\nspaces:\n  r2:\n    dimenson: 2\n")
        with self.assertRaises(ConfigError) as cm:
            load_config(path)
        self.assertEqual(cm.exception.key, "spaces.r2.dimenson")
        self.assertEqual(cm.exception.line, 4)
        self.assertIn(f"{path}:4", str(cm.exception))

    def test_unknown_keys_in_every_nested_section(self):
        cases = {
            "samples:\n  sphere_count: 8\n": ("samples.sphere_count", 2),
            "horizon:\n  nmax: 10\n": ("horizon.nmax", 2),
            "spaces:\n  r2:\n    profile: {kind: step, height: 0.5}\n": ("spaces.r2.profile.height", 3),
            "operators:\n  shear:\n    matrx: [[1.0, 0.0], [0.0, 1.0]]\n": ("operators.shear.matrx", 3),
            "sequences:\n  power_r2:\n    familly: power\n": ("sequences.power_r2.familly", 3),
            "operator_sequences:\n  shear_power:\n    decay_rate: 2.0\n": ("operator_sequences.shear_power.decay_rate", 3),
        }
        for text, (key, line) in cases.items():
            with self.subTest(key=key), self.assertRaises(ConfigError) as cm:
                load_config(self.write("run.yaml", text))
            self.assertEqual((cm.exception.key, cm.exception.line), (key, line))

    def test_negative_seed_in_file(self):
        path = self.write("run.yaml", "seed: -3\n")
        with self.assertRaises(ConfigError) as cm:
            load_config(path)
        self.assertEqual((cm.exception.key, cm.exception.line), ("seed", 1))

    def test_negative_seed_override(self):
        with self.assertRaises(ConfigError) as cm:
            load_config().with_overrides(seed=-1)
        self.assertEqual(cm.exception.key, "--seed")

    @settings(max_examples=25, deadline=None)
    @given(st.integers(min_value=0, max_value=2**32))
    def test_non_negative_seed_override_is_kept(self, seed):
        self.assertEqual(load_config().with_overrides(seed=seed).seed, seed)

    def test_missing_file(self):
        with self.assertRaises(ConfigError):
            load_config(self.tmp / "absent.yaml")

    def test_operator_shape_mismatch(self):
        path = self.write("run.yaml", "operators:\n  wide:\n    domain: r2\n    matrix: [[1.0, 2.0, 3.0]]\n")
        with self.assertRaises(ConfigError) as cm:
            load_config(path)
        self.assertEqual(cm.exception.key, "operators.wide")

    def test_alpha_grid_override(self):
        cfg = load_config()
        self.assertEqual(cfg.with_overrides(alpha_grid=[0.25, 0.75]).alpha_grid, (0.25, 0.75))
        with self.assertRaises(ConfigError):
            cfg.with_overrides(alpha_grid=[0.5, 0.2])
        with self.assertRaises(ConfigError) as cm:
            cfg.with_overrides(alpha_grid=[0.0, 0.5])
        self.assertEqual(cm.exception.key, "--alpha-grid.0")

    def test_undefined_space_lookup(self):
        with self.assertRaises(ConfigError):
            RunConfig.from_dict({}).space("r2")


class HelperTests(unittest.TestCase):
    def test_merge_is_recursive(self):
        merged = merge_dicts({"a": {"b": 1, "c": 2}, "d": [1]}, {"a": {"c": 3}, "d": [2]})
        self.assertEqual(merged, {"a": {"b": 1, "c": 3}, "d": [2]})

    def test_line_index(self):
        lines = yaml_line_index("seed: 1\nspaces:\n  r2:\n    dimension: 2\nalpha_grid:\n  - 0.5\n")
        self.assertEqual(lines["spaces.r2.dimension"], 4)
        self.assertEqual(lines["alpha_grid.0"], 6)


if __name__ == "__main__":
    unittest.main()
