import unittest

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from fuzzybound.exceptions import PreconditionError
from fuzzybound.fuzzy_space import FuzzySpace, ReciprocalProfile, StepProfile
from fuzzybound.operator_analysis import LinearOperator
from fuzzybound.operator_norm import (
    NormEvaluator,
    g_alpha,
    g_alpha_closed_form,
    norm_level_infimum,
    op_fuzzy_norm,
    operator_norm_profile,
    opnorm_axiom_check,
)

SPHERE = 16


def reciprocal(exponent=1.0, tnorm="standard-intersection"):
    return FuzzySpace.build(2, ReciprocalProfile(), tnorm=tnorm, exponent=exponent, name="r2")


def fleet(sp, size=4, seed=0):
    rng = np.random.default_rng(seed)
    ops = [LinearOperator.identity(sp, name="I"), LinearOperator.zero(sp)]
    return ops + [LinearOperator(0.5 * rng.standard_normal((2, 2)), sp, sp, f"T{i}") for i in range(size - 2)]


class ClosedFormTests(unittest.TestCase):
    def test_identity(self):
        I = LinearOperator.identity(reciprocal())
        for s in (0.5, 1.0, 3.0):
            with self.subTest(s=s):
                self.assertAlmostEqual(op_fuzzy_norm(I, s, sphere_samples=SPHERE).value, s / (1.0 + s), delta=1e-6)

    def test_zero_and_nonpositive(self):
        sp = reciprocal()
        ev = NormEvaluator(LinearOperator.zero(sp), SPHERE)
        np.testing.assert_array_equal(ev.norm([0.1, 1.0, 50.0]), [1.0, 1.0, 1.0])
        I = NormEvaluator(LinearOperator.identity(sp), SPHERE)
        np.testing.assert_array_equal(I.norm([-3.0, 0.0]), [0.0, 0.0])

    def test_g_matches_closed_form(self):
        T = LinearOperator(np.array([[1.0, 0.5], [0.0, 1.0]]), reciprocal(), reciprocal(), "shear")
        profile = operator_norm_profile(T, sphere_samples=SPHERE)
        self.assertTrue(profile.monotone)
        self.assertLess(profile.closed_form_error, 1e-6)
        self.assertAlmostEqual(g_alpha(T, 0.5, SPHERE), float(g_alpha_closed_form(T, 0.5)), places=7)
        with self.assertRaises(ValueError):
            g_alpha(T, 1.0)

    def test_level_infimum_of_the_norm(self):
        I = LinearOperator.identity(reciprocal())
        self.assertAlmostEqual(norm_level_infimum(I, 0.5, sphere_samples=SPHERE), 1.0, places=4)
        self.assertAlmostEqual(norm_level_infimum(I, 0.75, strict=True, sphere_samples=SPHERE), 3.0, places=3)


class PreconditionTests(unittest.TestCase):
    def test_drastic_codomain(self):
        sp = reciprocal(tnorm="drastic")
        with self.assertRaises(PreconditionError):
            NormEvaluator(LinearOperator.identity(sp))

    def test_step_domain(self):
        X = FuzzySpace.build(2, StepProfile(0.5))
        with self.assertRaises(PreconditionError):
            op_fuzzy_norm(LinearOperator.identity(X, codomain=reciprocal()), 1.0)


class AxiomTests(unittest.TestCase):
    def test_fleet_passes_all_axioms(self):
        report = opnorm_axiom_check(fleet(reciprocal()), [2.0, 3.0, 0.5], [0.5, 1.0, 2.0], seed=0, sphere_samples=SPHERE)
        self.assertTrue(report.passed, report.failures())

    def test_scaling_with_exponent_two(self):
        sp = reciprocal(exponent=2.0)
        report = opnorm_axiom_check(fleet(sp, 3), [2.0, 3.0, 0.5], [0.5, 1.0, 2.0], seed=0, sphere_samples=SPHERE, axioms=("NIII", "g-monotone"))
        self.assertTrue(report.passed, report.failures())
        self.assertEqual([r.axiom for r in report.results], ["NIII", "g-monotone"])

    def test_unknown_axiom(self):
        with self.assertRaises(ValueError):
            opnorm_axiom_check(fleet(reciprocal()), [2.0], [1.0], seed=0, axioms=("NX",))

    @settings(max_examples=25, deadline=None)
    @given(st.floats(min_value=0.05, max_value=20.0))
    def test_monotone_in_s(self, s):
        ev = NormEvaluator(LinearOperator(np.array([[2.0, 0.0], [1.0, 1.0]]), reciprocal(), reciprocal()), SPHERE)
        low, high = ev.norm([s, 1.5 * s])
        self.assertLessEqual(low, high + 1e-6)


if __name__ == "__main__":
    unittest.main()
