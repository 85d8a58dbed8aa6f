import math
import unittest

import numpy as np

from fuzzybound.exceptions import TheoremContradiction
from fuzzybound.fuzzy_space import FuzzySpace, ReciprocalProfile, StepProfile
from fuzzybound.operator_analysis import (
    DEFAULT_ALPHA_GRID,
    LinearOperator,
    bounded_certificate,
    boundedness_ratio,
    continuity_probe,
    counterexample_suite,
    defn_equivalence_check,
    finite_dim_boundedness_sweep,
    independence_constant,
    independence_inequality_check,
    subspace_check,
    unit_l1_grid,
)

SPHERE = 64


def reciprocal(n=2):
    return FuzzySpace.build(n, ReciprocalProfile(), name=f"r{n}")


def step(n=2):
    return FuzzySpace.build(n, StepProfile(0.5), name="step")


class OperatorTests(unittest.TestCase):
    def test_shape_and_finiteness(self):
        with self.assertRaises(ValueError):
            LinearOperator(np.eye(3), reciprocal(), reciprocal())
        with self.assertRaises(ValueError):
            LinearOperator(np.array([[np.inf, 0.0], [0.0, 1.0]]), reciprocal(), reciprocal())

    def test_gain_and_principal_direction(self):
        T = LinearOperator(np.array([[3.0, 0.0], [0.0, 1.0]]), reciprocal(), reciprocal())
        self.assertAlmostEqual(T.crisp_gain(), 3.0)
        np.testing.assert_allclose(np.abs(T.principal_direction()), [1.0, 0.0], atol=1e-12)

    def test_ratio_rejects_zero_vector(self):
        T = LinearOperator.identity(reciprocal())
        with self.assertRaises(ValueError):
            boundedness_ratio(T, [0.0, 0.0], 0.5)

    def test_ratio_is_scale_invariant(self):
        T = LinearOperator(np.array([[1.0, 0.5], [0.0, 1.0]]), reciprocal(), reciprocal())
        base = boundedness_ratio(T, [0.3, -1.1], 0.3)
        for c in (1e-3, 7.0, -40.0):
            self.assertAlmostEqual(boundedness_ratio(T, [0.3 * c, -1.1 * c], 0.3) / base, 1.0, places=7)


class CertificateTests(unittest.TestCase):
    def test_identity_closed_form(self):
        cert = bounded_certificate(LinearOperator.identity(reciprocal()), DEFAULT_ALPHA_GRID, SPHERE, seed=0)
        self.assertTrue(cert.bounded)
        for alpha in DEFAULT_ALPHA_GRID:
            self.assertAlmostEqual(cert.M(alpha), alpha / (1.0 - alpha), places=8)
        with self.assertRaises(KeyError):
            cert.entry(0.55)

    def test_zero_operator(self):
        cert = bounded_certificate(LinearOperator.zero(reciprocal()), DEFAULT_ALPHA_GRID, SPHERE, seed=0)
        self.assertTrue(cert.bounded)
        self.assertEqual(max(cert.M(a) for a in DEFAULT_ALPHA_GRID), 0.0)

    def test_step_domain_is_unbounded_from_one_half(self):
        T = LinearOperator.identity(step(), 2.0, reciprocal(), "2I")
        cert = bounded_certificate(T, DEFAULT_ALPHA_GRID, SPHERE, seed=0)
        self.assertEqual(cert.unbounded_alphas, [0.5, 0.6, 0.7, 0.8, 0.9])
        self.assertTrue(math.isinf(cert.M(0.7)))
        self.assertAlmostEqual(cert.M(0.2), 2.0 / 0.8, places=8)


class EquivalenceTests(unittest.TestCase):
    def setUp(self):
        self.T = LinearOperator(np.array([[1.0, 0.5], [0.0, 1.0]]), reciprocal(), reciprocal(), "shear")
        self.cert = bounded_certificate(self.T, DEFAULT_ALPHA_GRID, SPHERE, seed=1)

    def test_certified_bounds_hold_in_both_forms(self):
        verdict = defn_equivalence_check(self.T, self.cert, 2000, seed=2)
        self.assertTrue(verdict.passed, verdict.per_alpha)
        self.assertTrue(verdict.consistent)

    def test_halved_bound_is_refuted(self):
        halved = {e.alpha: 0.5 * e.M for e in self.cert.entries}
        verdict = defn_equivalence_check(self.T, self.cert, 2000, seed=2, bounds=halved)
        self.assertFalse(verdict.passed)
        self.assertTrue(all(p["reverse_witness"] is not None for p in verdict.per_alpha))


class ContinuityTests(unittest.TestCase):
    def test_identity_is_continuous(self):
        T = LinearOperator.identity(reciprocal())
        verdict = continuity_probe(T, [np.zeros(2), np.ones(2)], [np.array([1.0, 0.0])], n_max=10_000)
        self.assertTrue(verdict.continuous)
        self.assertTrue(verdict.consistent_across_points)


class CounterexampleTests(unittest.TestCase):
    def test_step_domain(self):
        result = counterexample_suite("step-domain", sphere_samples=SPHERE)
        self.assertTrue(result.continuous)
        self.assertFalse(result.bounded)
        self.assertEqual(result.unbounded_alphas, [0.5, 0.6, 0.7, 0.8, 0.9])
        self.assertLessEqual(result.max_M_error, 1e-6)

    def test_variants(self):
        self.assertTrue(counterexample_suite("reciprocal-domain", sphere_samples=SPHERE).bounded)
        self.assertTrue(counterexample_suite("zero-operator", sphere_samples=SPHERE).bounded)
        with self.assertRaises(ValueError):
            counterexample_suite("nope")

    def test_wrong_tolerance_contradicts(self):
        with self.assertRaises(TheoremContradiction):
            counterexample_suite("step-domain", sphere_samples=SPHERE, alpha_grid=(0.2, 0.5), M_tol=-1.0)


class IndependenceTests(unittest.TestCase):
    def test_unit_l1_grid(self):
        grid = unit_l1_grid(3, 8)
        np.testing.assert_allclose(np.abs(grid).sum(axis=1), 1.0)

    def test_standard_basis_closed_form(self):
        for n in (2, 3):
            with self.subTest(n=n):
                ic = independence_constant(reciprocal(n), np.eye(n), 0.5)
                self.assertAlmostEqual(ic.value, 2.0 / math.sqrt(n), places=6)

    def test_inequality_and_inflated_constant(self):
        ic = independence_constant(reciprocal(), np.array([[1.0, 1.0], [0.0, 2.0]]), 0.3)
        self.assertGreater(ic.value, 0.0)
        self.assertTrue(independence_inequality_check(ic, 1000, seed=4).passed)
        inflated = independence_inequality_check(ic, 1000, seed=4, constant=2.0 * ic.value)
        self.assertFalse(inflated.passed)
        self.assertIsNotNone(inflated.witness)

    def test_degenerate_inputs(self):
        with self.assertRaises(ValueError):
            independence_constant(reciprocal(), np.array([[1.0, 1.0], [2.0, 2.0]]), 0.5)
        self.assertEqual(independence_constant(step(), np.eye(2), 0.9).value, 0.0)


class SubspaceAndSweepTests(unittest.TestCase):
    def test_linear_combination(self):
        sp = reciprocal()
        T1 = LinearOperator.identity(sp, name="I")
        T2 = LinearOperator(np.array([[1.0, 0.5], [0.0, 1.0]]), sp, sp, "shear")
        verdict = subspace_check(T1, T2, 2.0, -0.5, sphere_samples=SPHERE, pair_samples=2000)
        self.assertTrue(verdict.passed, verdict.entries)
        with self.assertRaises(ValueError):
            subspace_check(T1, T2, 0.0, 1.0)

    def test_sweep(self):
        report = finite_dim_boundedness_sweep(reciprocal(2), reciprocal(3), 5, seed=0, sphere_samples=SPHERE)
        self.assertEqual(report.status, "pass")
        self.assertEqual(report.unbounded, [])
        self.assertGreater(min(report.independence.values()), 0.0)

    def test_sweep_refuses_without_nvi(self):
        report = finite_dim_boundedness_sweep(step(), reciprocal(), 5, seed=0)
        self.assertEqual(report.status, "precondition-unmet")
        self.assertEqual(report.operators, 0)


if __name__ == "__main__":
    unittest.main()
