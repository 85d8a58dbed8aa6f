import math
import unittest

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from fuzzybound.fuzzy_space import (
    CONVERGES,
    DIVERGES,
    ConvergenceMode,
    FuzzySpace,
    PiecewiseLinearProfile,
    ReciprocalProfile,
    SequenceSpec,
    StepProfile,
    axiom_check_bN,
    level_infima,
    level_infimum,
    norm_eval,
    pick_profile,
    sample_indices,
    seq_cauchy,
    seq_convergence,
)

GRID = [round(0.1 * k, 1) for k in range(1, 10)]


def reciprocal(n=2, exponent=1.0):
    return FuzzySpace.build(n, ReciprocalProfile(), exponent=exponent, name="reciprocal")


def step(n=2):
    return FuzzySpace.build(n, StepProfile(0.5), name="step")


class ProfileTests(unittest.TestCase):
    def test_step_quantiles(self):
        p = StepProfile(0.5)
        self.assertEqual(float(p.quantile(0.5)), 0.0)
        self.assertEqual(float(p.quantile(0.5, strict=True)), 1.0)
        self.assertEqual(float(p.quantile(0.75)), 1.0)
        self.assertEqual(float(p(1.0)), 0.5)
        self.assertFalse(p.satisfies_nvi)
        self.assertTrue(StepProfile(0.0).satisfies_nvi)

    def test_reciprocal_quantile(self):
        self.assertAlmostEqual(float(ReciprocalProfile().quantile(0.5)), 2.0)
        self.assertTrue(ReciprocalProfile().satisfies_nvi)

    def test_piecewise_linear(self):
        p = PiecewiseLinearProfile(((0.0, 0.0), (1.0, 0.5), (3.0, 1.0)))
        self.assertAlmostEqual(float(p(0.5)), 0.25)
        self.assertAlmostEqual(float(p.quantile(0.25)), 0.5)
        self.assertAlmostEqual(float(p.quantile(0.75)), 2.0)
        self.assertEqual(float(p(10.0)), 1.0)

    def test_invalid_profiles(self):
        with self.assertRaises(ValueError):
            StepProfile(1.0)
        with self.assertRaises(ValueError):
            PiecewiseLinearProfile(((0.0, 0.0), (1.0, 0.8)))
        with self.assertRaises(ValueError):
            pick_profile("gaussian")


class NormTests(unittest.TestCase):
    def test_theta_and_nonpositive_t(self):
        sp = reciprocal()
        self.assertEqual(norm_eval(sp, [0.0, 0.0], 0.5), 1.0)
        self.assertEqual(norm_eval(sp, [1.0, 0.0], 0.0), 0.0)
        self.assertEqual(norm_eval(sp, [1.0, 0.0], -2.0), 0.0)
        self.assertAlmostEqual(norm_eval(sp, [0.6, 0.8], 2.0), 0.5)

    def test_dimension_mismatch(self):
        with self.assertRaises(ValueError):
            norm_eval(reciprocal(), [1.0, 2.0, 3.0], 1.0)

    def test_K_defaults_to_exponent(self):
        self.assertEqual(reciprocal(exponent=2.0).K, 2.0)
        self.assertEqual(reciprocal().K, 1.0)
        with self.assertRaises(ValueError):
            FuzzySpace.build(2, ReciprocalProfile(), K=0.5)


class LevelInfimumTests(unittest.TestCase):
    def test_examples(self):
        self.assertAlmostEqual(level_infimum(reciprocal(), [0.6, 0.8], 0.5).value, 2.0, places=9)
        self.assertAlmostEqual(level_infimum(step(), [3.0, 0.0], 0.75).value, 3.0, places=9)
        self.assertEqual(level_infimum(step(), [3.0, 0.0], 0.25).value, 0.0)

    def test_theta(self):
        for alpha in GRID:
            self.assertEqual(level_infimum(reciprocal(), [0.0, 0.0], alpha).value, 0.0)

    def test_strict_differs_at_step_height(self):
        self.assertEqual(level_infimum(step(), [2.0, 0.0], 0.5).value, 0.0)
        self.assertAlmostEqual(level_infimum(step(), [2.0, 0.0], 0.5, strict=True).value, 2.0, places=9)

    def test_alpha_out_of_range(self):
        for alpha in (0.0, 1.0, -0.1):
            with self.assertRaises(ValueError):
                level_infimum(reciprocal(), [1.0, 0.0], alpha)

    def test_batch_matches_closed_form(self):
        rng = np.random.default_rng(3)
        for sp in (reciprocal(), step(), reciprocal(exponent=2.0), FuzzySpace.build(2, PiecewiseLinearProfile(((0.0, 0.0), (1.0, 0.5), (3.0, 1.0))))):
            xs = rng.standard_normal((50, 2))
            levels = rng.choice(GRID, 50)
            got = level_infima(sp, xs, levels)
            want = sp.closed_form_level(xs, levels)
            np.testing.assert_allclose(got, want, rtol=1e-9, atol=1e-9)

    @settings(max_examples=60, deadline=None)
    @given(
        st.floats(min_value=0.05, max_value=20.0),
        st.booleans(),
        st.sampled_from(GRID),
        st.lists(st.floats(min_value=-5.0, max_value=5.0), min_size=2, max_size=2).filter(lambda v: math.hypot(*v) > 1e-3),
    )
    def test_scaling(self, c, negate, alpha, x):
        sp = reciprocal(exponent=2.0)
        c = -c if negate else c
        scaled = level_infimum(sp, np.multiply(c, x), alpha).value
        base = level_infimum(sp, x, alpha).value
        self.assertLessEqual(abs(scaled - c * c * base), 1e-9 * max(1.0, scaled))

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.floats(min_value=-5.0, max_value=5.0), min_size=2, max_size=2))
    def test_monotone_in_alpha(self, x):
        values = level_infima(reciprocal(), np.tile(x, (len(GRID), 1)), np.array(GRID))
        self.assertTrue(np.all(np.diff(values) >= -1e-9))


class AxiomTests(unittest.TestCase):
    def test_exponent_one_spaces_pass(self):
        for sp in (reciprocal(), step(), reciprocal(n=3)):
            with self.subTest(space=sp.name):
                report = axiom_check_bN(sp, 2000, seed=5)
                self.assertTrue(report.passed, report.failures())

    def test_nvi_flag(self):
        self.assertTrue(axiom_check_bN(reciprocal(), 100, seed=0).flags["satisfies_NVI"])
        self.assertFalse(axiom_check_bN(step(), 100, seed=0).flags["satisfies_NVI"])

    def test_exponent_two_breaks_only_the_asymmetric_triangle(self):
        report = axiom_check_bN(reciprocal(exponent=2.0), 2000, seed=5)
        self.assertFalse(report.result("bN4").passed)
        self.assertIsNotNone(report.result("bN4").witness)
        self.assertTrue(report.result("bN4-symmetric").passed)
        others = [r for r in report.results if r.axiom != "bN4"]
        self.assertTrue(all(r.passed for r in others), [r for r in others if not r.passed])

    def test_sample_count_floor(self):
        with self.assertRaises(ValueError):
            axiom_check_bN(reciprocal(), 3, seed=0)


class SequenceTests(unittest.TestCase):
    def setUp(self):
        self.sp = reciprocal()
        self.power = SequenceSpec("power", (1.0, -1.0), (0.3, 0.4))
        self.alternating = SequenceSpec("alternating", (0.0, 0.0), (1.0, 0.0))

    def test_sample_indices(self):
        idx = sample_indices(1000)
        self.assertEqual(idx[0], 1)
        self.assertEqual(list(idx[-2:]), [999, 1000])
        self.assertTrue(np.all(np.diff(idx) > 0))

    def test_power_converges_in_every_mode(self):
        for mode in (ConvergenceMode.classical(), ConvergenceMode.alpha_fuzzy(0.5), ConvergenceMode.l_fuzzy(GRID)):
            with self.subTest(mode=mode.label()):
                self.assertEqual(seq_convergence(self.sp, self.power, mode, 1000).verdict, CONVERGES)
                self.assertEqual(seq_cauchy(self.sp, self.power, mode, 1000).verdict, CONVERGES)

    def test_alternating_diverges_with_witness(self):
        mode = ConvergenceMode.l_fuzzy(GRID)
        verdict = seq_convergence(self.sp, self.alternating, mode, 1000)
        self.assertEqual(verdict.verdict, DIVERGES)
        self.assertIsNotNone(verdict.witness)
        cauchy = seq_cauchy(self.sp, self.alternating, mode, 1000)
        self.assertEqual(cauchy.verdict, DIVERGES)
        n, m, _ = cauchy.witness
        self.assertNotEqual(int(n) % 2, int(m) % 2)

    def test_wrong_limit_does_not_converge(self):
        verdict = seq_convergence(self.sp, self.power.with_limit((0.0, 0.0)), ConvergenceMode.alpha_fuzzy(0.5), 1000)
        self.assertNotEqual(verdict.verdict, CONVERGES)

    def test_image_keeps_family(self):
        image = self.power.image(np.array([[2.0, 0.0], [0.0, 3.0]]))
        self.assertEqual(image.family, "power")
        np.testing.assert_allclose(image.direction, (0.6, 1.2))
        np.testing.assert_allclose(image.term(4), [2.0 + 0.15, -3.0 + 0.3])

    def test_bad_modes_and_specs(self):
        with self.assertRaises(ValueError):
            ConvergenceMode.alpha_fuzzy(1.0)
        with self.assertRaises(ValueError):
            SequenceSpec("power", (0.0, 0.0))
        with self.assertRaises(ValueError):
            seq_convergence(reciprocal(n=3), self.power, ConvergenceMode.classical(), 100)


if __name__ == "__main__":
    unittest.main()
