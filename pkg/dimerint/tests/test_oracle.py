"""
Test suite for the core/oracle.py module

Version: 1.0.0
"""

import unittest

from unittest.mock import patch

import numpy as np

from dimerint.core.errors import PreconditionError, SingularMatrixError, SizeGuardError
from dimerint.core.greens import green_matrix
from dimerint.core.lattice import (Arrow, FiniteWindow, VertexId, WeightParams, black,
                                   build_window_matrix, white)
from dimerint.core.oracle import (WindowInverse, compare_window_entries, matching_count_check,
                                  probe_window, truncated_green_solve, window_convergence,
                                  window_edge_probabilities, window_inverse)


class TestWindowInverse(unittest.TestCase):
    """
    Test cases for the finite-window inverse.
    """

    def setUp(self):
        """
        Standing weights and a 5 x 5 face window.
        """

        self.params = WeightParams(1.0, 4.0)
        self.window = FiniteWindow(-2, 2, -2, 2)

    def test_dense_and_sparse_agree(self):
        """
        The dense inverse and the sparse LU give the same entries.
        """

        dense = window_inverse(self.window, self.params)
        sparse = window_inverse(self.window, self.params, dense_limit=0)

        self.assertTrue(dense.is_dense)
        self.assertFalse(sparse.is_dense)
        for w in (white(Arrow.UP, 0, 0), white(Arrow.DOWN, 1, -1)):
            for b in (black(Arrow.UP, 0, 0), black(Arrow.DOWN, -2, 2)):
                self.assertAlmostEqual(dense.entry(w, b), sparse.entry(w, b), places=10)

    def test_residual(self):
        """
        K~^T times the stored inverse is the identity.
        """

        dense = window_inverse(self.window, self.params)
        self.assertLess(dense.residual(), 1e-10)

        sparse = window_inverse(self.window, self.params, dense_limit=0)
        sparse.column(black(Arrow.UP, 0, 0))
        self.assertLess(sparse.residual(), 1e-10)

    def test_condition_estimate(self):
        """
        Both paths report a finite condition number of at least one.
        """

        for limit in (4000, 0):
            inverse = window_inverse(self.window, self.params, dense_limit=limit)
            self.assertGreaterEqual(inverse.condition_estimate, 1.0)
            self.assertTrue(np.isfinite(inverse.condition_estimate))

    def test_edge_probabilities_sum_to_one(self):
        """
        Edge probabilities at every white vertex sum to one.
        """

        inverse = window_inverse(self.window, self.params)
        for w in inverse.kasteleyn.whites:
            total = sum(window_edge_probabilities(inverse, w).values())
            self.assertAlmostEqual(total, 1.0, places=10)

        with self.assertRaises(PreconditionError):
            window_edge_probabilities(inverse, white(Arrow.UP, 9, 9))

    def test_vertices_outside_window(self):
        """
        Entries are only defined for window vertices.
        """

        inverse = window_inverse(self.window, self.params)
        with self.assertRaises(PreconditionError):
            inverse.entry(white(Arrow.UP, 5, 0), black(Arrow.UP, 0, 0))

        with self.assertRaises(PreconditionError):
            inverse.column(black(Arrow.UP, 0, 7))

    def test_count_mismatch(self):
        """
        Windows with unequal colour counts are refused.
        """

        window = FiniteWindow(0, 1, 0, 1, removed=frozenset({black(Arrow.UP, 0, 0)}))
        with self.assertRaises(PreconditionError):
            WindowInverse(window, build_window_matrix(window, self.params))

    def test_isolated_vertex(self):
        """
        A balanced window with an isolated vertex is singular.
        """

        removed = frozenset({white(Arrow.DOWN, 0, 0), white(Arrow.UP, 0, 0),
                             black(Arrow.DOWN, 1, 0), black(Arrow.UP, 1, 0)})
        window = FiniteWindow(0, 1, 0, 0, removed=removed)

        with self.assertRaises(SingularMatrixError):
            window_inverse(window, self.params)

    def test_no_matching_without_isolated_vertex(self):
        """
        A balanced window whose every vertex has a neighbour but which splits
        into an unbalanced piece is singular.
        """

        removed = frozenset(VertexId.from_position(x, y)
                            for x, y in ((1, 1), (2, 0), (2, 1), (3, 0)))
        window = FiniteWindow(0, 2, 0, 0, removed=removed)

        with self.assertRaises(SingularMatrixError):
            window_inverse(window, self.params)

    def test_ill_conditioned_window_is_inverted(self):
        """
        A deep rectangle in the frozen half has matchings but a condition
        number near 1e16; it is inverted with a warning instead of refused.
        """

        window = FiniteWindow(-42, -17, -12, 13)
        with self.assertLogs("dimerint.core.oracle", level="WARNING") as logs:
            inverse = window_inverse(window, self.params)

        self.assertTrue(inverse.is_dense)
        self.assertIn("ill-conditioned", logs.output[0])


class TestWindowComparison(unittest.TestCase):
    """
    Test cases comparing windows with the integral formula.
    """

    def setUp(self):
        """
        Two probes on the left of the interface.
        """

        self.params = WeightParams(1.0, 4.0)
        source = black(Arrow.UP, -1, 0)
        self.probes = [(white(Arrow.UP, -1, 0), source),
                       (white(Arrow.DOWN, 0, 1), source)]

    def test_probe_window(self):
        """
        The probe window pads the probe bounding box.
        """

        window = probe_window(self.probes, margin=3, right_margin=5)
        self.assertEqual((window.n_min, window.n_max, window.m_min, window.m_max),
                         (-4, 5, -3, 4))

        with self.assertRaises(PreconditionError):
            probe_window([], margin=3)

    def test_staircase_on_strong_interface(self):
        """
        compare_window_entries trims the left columns when b - a > 2 and keeps
        the full rectangle otherwise.
        """

        reference = [0.0] * len(self.probes)
        with patch("dimerint.core.oracle.window_inverse") as inverse:
            compare_window_entries(self.probes, self.params, 3, reference=reference)
            compare_window_entries(self.probes, WeightParams(1.0, 2.5), 3, reference=reference)

        staircase, rectangle = (call.args[0] for call in inverse.call_args_list)
        self.assertEqual(len(staircase.removed), 2 * (0 - staircase.n_min + 1))
        self.assertIn(black(Arrow.DOWN, -1, staircase.m_min), staircase.removed)
        self.assertIn(white(Arrow.UP, -1, staircase.m_max), staircase.removed)
        self.assertEqual(rectangle.removed, frozenset())

    def test_large_window_agrees(self):
        """
        A padded staircase window reproduces the integral entries to 2%.
        """

        comparisons = compare_window_entries(self.probes, self.params, margin=20,
                                             right_margin=35)
        for c in comparisons:
            self.assertLess(c.error, max(0.02 * abs(c.integral_value), 2e-3), msg=str(c))

    def test_convergence_rows(self):
        """
        The window error against the integral shrinks over margins 10, 15, 20.
        """

        rows = window_convergence(self.probes, self.params, margins=(10, 15, 20))
        errors = [error for _, error in rows]

        self.assertEqual([margin for margin, _ in rows], [10, 15, 20])
        self.assertGreater(errors[0], errors[1])
        self.assertGreater(errors[1], errors[2])
        self.assertLess(errors[2], 0.05)


class TestTruncatedSolve(unittest.TestCase):
    """
    Test cases for the truncated difference system.
    """

    def setUp(self):
        """
        Standing weights and an omega off the real axis.
        """

        self.params = WeightParams(1.0, 4.0)
        self.omega = complex(np.exp(0.9j))

    def test_matches_closed_form(self):
        """
        Away from the truncation edges the solve matches the closed form.
        """

        for n0 in (-2, 0, 3):
            truncated = truncated_green_solve(n0, self.omega, 50, self.params)
            for n in (n0 - 4, n0, n0 + 1, 10):
                np.testing.assert_allclose(truncated.at(n),
                                           green_matrix(n, n0, self.omega, self.params),
                                           atol=1e-8)

    def test_preconditions(self):
        """
        Short truncations and off-circle omegas are rejected.
        """

        with self.assertRaises(PreconditionError):
            truncated_green_solve(5, self.omega, 12, self.params)

        with self.assertRaises(ValueError):
            truncated_green_solve(0, 2.0 + 0j, 30, self.params)


class TestMatchingCount(unittest.TestCase):
    """
    Test cases for the determinant against enumeration.
    """

    def setUp(self):
        """
        Standing weights.
        """

        self.params = WeightParams(1.0, 4.0)

    def test_full_windows_agree(self):
        """
        |det K~| equals the weighted matching count.
        """

        for window in (FiniteWindow(0, 0, 0, 0), FiniteWindow(-1, 0, 0, 1),
                       FiniteWindow(-1, 1, -1, 1)):
            check = matching_count_check(window, self.params)
            self.assertTrue(check.agree, msg=f"{window}: {check}")
            self.assertGreater(check.enum_weighted, 0.0)

    def test_single_face(self):
        """
        One left-half face gives 1 + a b.
        """

        check = matching_count_check(FiniteWindow(0, 0, 0, 0), self.params)
        self.assertAlmostEqual(check.det_abs, 5.0)

    def test_unmatchable_window(self):
        """
        A punctured window has neither matchings nor a determinant.
        """

        window = FiniteWindow(0, 1, 0, 1, removed=frozenset({black(Arrow.UP, 0, 0)}))
        check = matching_count_check(window, self.params)

        self.assertEqual(check.det_abs, 0.0)
        self.assertEqual(check.enum_weighted, 0.0)
        self.assertTrue(check.agree)

    def test_size_guard(self):
        """
        The enumeration guard applies.
        """

        with self.assertRaises(SizeGuardError):
            matching_count_check(FiniteWindow(-2, 2, -2, 2), self.params)


if __name__ == "__main__":
    unittest.main()
