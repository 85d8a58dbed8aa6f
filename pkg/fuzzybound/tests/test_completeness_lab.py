import unittest

import numpy as np

from fuzzybound.completeness_lab import (
    OperatorSequence,
    extrapolated_limit,
    limit_uniqueness_probe,
    operator_seq_cauchy,
    operator_seq_limit,
)
from fuzzybound.exceptions import PreconditionError
from fuzzybound.fuzzy_space import FuzzySpace, ReciprocalProfile, SequenceSpec
from fuzzybound.operator_analysis import LinearOperator

SPHERE = 16
SHEAR = np.array([[1.0, 0.5], [0.0, 1.0]])
SMALL = np.array([[0.2, 0.1], [0.0, 0.3]])


def r2(tnorm="standard-intersection"):
    return FuzzySpace.build(2, ReciprocalProfile(), tnorm=tnorm, name="r2")


def shear_sequence(decay="power", perturbation=SMALL, **kwargs):
    sp = r2()
    return OperatorSequence(LinearOperator(SHEAR, sp, sp, "shear"), perturbation, decay, name=f"shear_{decay}", **kwargs)


class OperatorSequenceTests(unittest.TestCase):
    def test_rejects_bad_families(self):
        with self.assertRaises(ValueError):
            shear_sequence("cubic")
        with self.assertRaises(ValueError):
            shear_sequence(perturbation=np.ones((3, 2)))
        with self.assertRaises(ValueError):
            shear_sequence("geometric", ratio=1.5)

    def test_coefficients(self):
        np.testing.assert_array_equal(shear_sequence("alternating").coefficients([1, 2, 3]), [1.0, 0.0, 1.0])
        np.testing.assert_allclose(shear_sequence("geometric", ratio=0.5).coefficients([1, 2]), [0.5, 0.25])
        np.testing.assert_array_equal(shear_sequence("constant").coefficients([1, 5]), [0.0, 0.0])

    def test_difference_is_scaled_perturbation(self):
        seq = shear_sequence()
        np.testing.assert_allclose(seq.difference(2, 4).matrix, 0.25 * SMALL, atol=1e-15)


class CauchyAndLimitTests(unittest.TestCase):
    def test_power_family_has_bounded_limit(self):
        result = operator_seq_limit(shear_sequence(), sphere_samples=SPHERE)
        self.assertEqual(result.verdict, "pass", result.as_dict())
        self.assertTrue(result.bounded)
        self.assertLessEqual(result.entry_error, 1e-9)
        self.assertEqual(result.columns, ["converges", "converges"])
        np.testing.assert_allclose(result.limit, SHEAR, atol=1e-12)

    def test_limit_is_extrapolated_from_horizon_terms(self):
        seq = shear_sequence(n_max=4)
        limit, (n, m) = extrapolated_limit(seq)
        self.assertEqual((n, m), (4, 2))
        np.testing.assert_allclose(limit, SHEAR, atol=1e-12)
        np.testing.assert_allclose(seq.term(4).matrix - limit, 0.25 * SMALL, atol=1e-12)

    def test_short_horizon_far_from_the_limit_fails(self):
        result = operator_seq_limit(shear_sequence(n_max=4), tol=10.0, sphere_samples=SPHERE)
        self.assertEqual(result.cauchy.verdict, "converges")
        self.assertLessEqual(result.entry_error, 1e-9)
        self.assertGreater(max(result.residuals.values()), 1e-2)
        self.assertEqual(result.verdict, "fail")
        self.assertIn("from the limit", result.note)

    def test_growth_is_not_cauchy(self):
        seq = shear_sequence("growth", perturbation=0.1 * np.eye(2))
        verdict = operator_seq_cauchy(seq, sphere_samples=SPHERE)
        self.assertFalse(verdict.cauchy)
        result = operator_seq_limit(seq, sphere_samples=SPHERE)
        self.assertEqual(result.verdict, "precondition-unmet")
        self.assertIsNone(result.limit)

    def test_alternating_diverges_with_witness(self):
        verdict = operator_seq_cauchy(shear_sequence("alternating", perturbation=[[0.0, 0.5], [0.5, 0.0]]), sphere_samples=SPHERE)
        self.assertEqual(verdict.verdict, "diverges-witness")
        self.assertIsNotNone(verdict.witness)


class UniquenessTests(unittest.TestCase):
    SEQ = SequenceSpec("power", (1.0, -1.0), (0.3, 0.4))

    def test_decoys_keep_a_positive_floor(self):
        verdict = limit_uniqueness_probe(r2(), self.SEQ, [[0.0, 0.0], [1.0, 0.0]], 0.5)
        self.assertTrue(verdict.passed, verdict.as_dict())
        self.assertEqual(verdict.limit_verdict, "converges")
        for row in verdict.decoys:
            self.assertGreater(row["observed_floor"], 0.0)

    def test_decoy_equal_to_limit_is_rejected(self):
        verdict = limit_uniqueness_probe(r2(), self.SEQ, [[1.0, -1.0]], 0.5)
        self.assertEqual(verdict.decoys[0]["status"], "rejected")

    def test_drastic_t_norm_is_a_precondition(self):
        with self.assertRaises(PreconditionError):
            limit_uniqueness_probe(r2("drastic"), self.SEQ, [[0.0, 0.0]], 0.5)


if __name__ == "__main__":
    unittest.main()
