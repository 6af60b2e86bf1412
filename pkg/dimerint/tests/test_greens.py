"""
Test suite for the core/greens.py module

Version: 1.0.0
"""

import unittest

import numpy as np

from dimerint.core.errors import DegenerateCoefficientError, PreconditionError
from dimerint.core.greens import (GreenCase, Region, as_arrow, coefficients,
                                  coefficients_by_solve, green_eval, green_matrix,
                                  interface_coeff_split, kernel_eval, kernel_factor,
                                  little_g, operator_residual, region_root)
from dimerint.core.lattice import Arrow, WeightParams
from dimerint.core.spectral import spectral_data


class TestCoefficients(unittest.TestCase):
    """
    Test cases for the closed-form coefficients and the junction solve.
    """

    def setUp(self):
        """
        Eight omegas off the real axis and two weight pairs.
        """

        self.omega = np.exp(2j * np.pi * (np.arange(8) + 0.5) / 8)
        self.weights = (WeightParams(1.0, 4.0), WeightParams(1.0, 1.0), WeightParams(0.5, 3.0))

    def test_case_for_source(self):
        """
        Positive sources use GT, the rest LT.
        """

        self.assertIs(GreenCase.for_source(3), GreenCase.GT)
        self.assertIs(GreenCase.for_source(0), GreenCase.LT)
        self.assertIs(GreenCase.for_source(-2), GreenCase.LT)

    def test_wrong_case_rejected(self):
        """
        GT with n0 <= 0 and LT with n0 > 0 raise PreconditionError.
        """

        params = self.weights[0]
        with self.assertRaises(PreconditionError):
            coefficients(GreenCase.GT, 0, self.omega, params)

        with self.assertRaises(PreconditionError):
            coefficients("LT", 2, self.omega, params)

    def test_closed_form_matches_solve(self):
        """
        Closed-form coefficients agree with the 8 x 8 junction solve.
        """

        for params in self.weights:
            for n0 in (-3, -1, 0, 1, 2, 5):
                case = GreenCase.for_source(n0)
                closed = coefficients(case, n0, self.omega, params)
                solved = coefficients_by_solve(case, n0, self.omega, params)
                for ours, theirs in zip(closed.c + closed.d, solved.c + solved.d):
                    np.testing.assert_allclose(ours, theirs, rtol=1e-9, atol=1e-10)

    def test_as_dict_keys(self):
        """
        LT coefficients are labelled with a prime marker.
        """

        params = self.weights[0]
        self.assertIn("c4", coefficients("GT", 1, self.omega, params).as_dict())
        self.assertIn("dp2", coefficients("LT", -1, self.omega, params).as_dict())

    def test_equal_weights_near_real_axis(self):
        """
        At a = b the denominators shrink like theta^2 near omega = 1 but do not
        cancel, so the coefficients stay finite.
        """

        params = self.weights[1]
        omega = np.exp(1j * np.array([5e-10, -5e-10, 1e-6, np.pi - 5e-10]))
        for n0 in (-2, 0, 1, 3):
            coeffs = coefficients(GreenCase.for_source(n0), n0, omega, params)
            for value in coeffs.c + coeffs.d:
                self.assertTrue(np.all(np.isfinite(value)))

    def test_exact_degeneracy_raises(self):
        """
        z1 = a omega - b vanishes exactly at omega = 1 when a = b.
        """

        with self.assertRaises(DegenerateCoefficientError):
            coefficients(GreenCase.LT, 0, np.array([1.0 + 0j]), self.weights[1])

        with self.assertRaises(DegenerateCoefficientError):
            coefficients(GreenCase.GT, 2, np.array([1.0 + 0j]), self.weights[1])


class TestGreensFunction(unittest.TestCase):
    """
    Test cases for the Green's function values.
    """

    def setUp(self):
        """
        Standing weights and eight test omegas.
        """

        self.params = WeightParams(1.0, 4.0)
        self.omega = np.exp(2j * np.pi * (np.arange(8) + 0.5) / 8)

    def test_delta_property(self):
        """
        The operator applied to G gives the identity at n0 and zero elsewhere.
        """

        for n0 in (-2, 0, 1, 3):
            for n in range(min(n0, 0) - 3, max(n0, 0) + 4):
                residual = operator_residual(n, n0, self.omega, self.params)
                np.testing.assert_allclose(residual, 0.0, atol=1e-10,
                                           err_msg=f"n={n}, n0={n0}")

    def test_methods_agree(self):
        """
        green_eval gives the same value through both coefficient paths.
        """

        for n0, n in ((2, 1), (2, 4), (-1, -3), (-1, 2)):
            closed = green_eval("down", "up", n, n0, self.omega, self.params)
            solved = green_eval("down", "up", n, n0, self.omega, self.params, method="solve")
            np.testing.assert_allclose(closed, solved, rtol=1e-9, atol=1e-12)

    def test_green_matrix_shape(self):
        """
        Vectorised evaluation returns one 2 x 2 block per omega.
        """

        self.assertEqual(green_matrix(1, 2, self.omega, self.params).shape, (8, 2, 2))
        self.assertEqual(green_matrix(1, 2, complex(self.omega[0]), self.params).shape, (2, 2))

    def test_decay_away_from_source(self):
        """
        G decays in both directions away from the source.
        """

        near = np.abs(green_matrix(1, 1, self.omega, self.params))
        far_left = np.abs(green_matrix(-15, 1, self.omega, self.params))
        self.assertTrue(np.all(far_left < near.max() * 1e-6))

    def test_invalid_method(self):
        """
        Unknown coefficient methods are rejected.
        """

        with self.assertRaises(ValueError):
            green_matrix(0, 1, self.omega, self.params, method="guess")


class TestKernel(unittest.TestCase):
    """
    Test cases for the kernel normalisation and far-region factorisation.
    """

    def setUp(self):
        """
        Standing weights and eight test omegas.
        """

        self.params = WeightParams(1.0, 4.0)
        self.omega = np.exp(2j * np.pi * (np.arange(8) + 0.5) / 8)

    def test_as_arrow(self):
        """
        Strings map to arrows and unknown labels are rejected.
        """

        self.assertIs(as_arrow("down"), Arrow.DOWN)
        self.assertIs(as_arrow(Arrow.UP), Arrow.UP)
        with self.assertRaises(ValueError):
            as_arrow("left")

    def test_kernel_factor(self):
        """
        1 on the diagonal, -omega for (up, down), -1/omega for (down, up).
        """

        omega = np.exp(0.7j)
        self.assertAlmostEqual(complex(kernel_factor("up", "up", omega)), 1.0)
        self.assertAlmostEqual(complex(kernel_factor("up", "down", omega)), -omega)
        self.assertAlmostEqual(complex(kernel_factor("down", "up", omega)), -1 / omega)

    def test_kernel_eval(self):
        """
        The kernel is the factor times the Green's function.
        """

        value = kernel_eval("up", "down", 2, 1, self.omega, self.params)
        expected = -self.omega * green_eval("up", "down", 2, 1, self.omega, self.params)
        np.testing.assert_allclose(value, expected)

    def test_little_g_right(self):
        """
        G_ij(n) = g r2-^n to the right of a GT source.
        """

        n0 = 2
        g = little_g("up", "down", Region.RIGHT_FAR, n0, self.omega, self.params)
        r = region_root(Region.RIGHT_FAR, self.omega, self.params)
        for n in range(n0 + 1, n0 + 6):
            np.testing.assert_allclose(green_eval("up", "down", n, n0, self.omega, self.params),
                                       g * r ** n, rtol=1e-9, atol=1e-13)

    def test_little_g_left(self):
        """
        G_ij(n) = g r1+^n to the left of an LT source, and kernel=True
        applies the kernel factor.
        """

        n0 = -1
        g = little_g("down", "up", "left_far", n0, self.omega, self.params)
        r = region_root("left_far", self.omega, self.params)
        for n in range(n0 - 5, n0):
            np.testing.assert_allclose(green_eval("down", "up", n, n0, self.omega, self.params),
                                       g * r ** n, rtol=1e-9, atol=1e-13)

        kernel = little_g("down", "up", "left_far", n0, self.omega, self.params, kernel=True)
        np.testing.assert_allclose(kernel, -g / self.omega)

    def test_interface_coeff_split(self):
        """
        The split reproduces c_4 and c'_1 at sources not used to build it.
        """

        c41, c42, c1p1, c1p2 = interface_coeff_split(self.omega, self.params)
        sd = spectral_data(self.omega, self.params)

        for n0 in (3, 4):
            expected = coefficients("GT", n0, self.omega, self.params).c[3]
            rebuilt = sd.r2_minus ** (-n0) * c41 + sd.r2_plus ** (-n0) * c42
            np.testing.assert_allclose(rebuilt, expected, rtol=1e-8, atol=1e-12)

        for n0 in (-2, -3):
            expected = coefficients("LT", n0, self.omega, self.params).c[0]
            rebuilt = sd.r1_plus ** (-n0) * c1p1 + sd.r1_minus ** (-n0) * c1p2
            np.testing.assert_allclose(rebuilt, expected, rtol=1e-8, atol=1e-12)

    def test_split_needs_distinct_sources(self):
        """
        Identical sources cannot separate the two parts.
        """

        with self.assertRaises(PreconditionError):
            interface_coeff_split(self.omega, self.params, gt_sources=(1, 1))


if __name__ == "__main__":
    unittest.main()
