"""
Test suite for the core/inverse.py module

Version: 1.0.0
"""

import unittest

from dimerint.core.errors import PreconditionError, SizeGuardError
from dimerint.core.inverse import (INVK_HEADER, edge_correlation, edge_probability, invk_entry,
                                   invk_periodic, invk_sweep, invk_uniform, kernel_entry)
from dimerint.core.lattice import Arrow, WeightParams, black, neighbors, white


class TestUniformLattice(unittest.TestCase):
    """
    Test cases on the uniform lattice, where every edge has probability 1/4.
    """

    def setUp(self):
        """
        All weights one.
        """

        self.params = WeightParams(1.0, 1.0)

    def test_edge_probability_quarter(self):
        """
        Each of the four edges at a white vertex has probability 1/4.
        """

        w = white(Arrow.UP, 0, 0)
        for b in neighbors(w):
            self.assertAlmostEqual(edge_probability([(w, b)], self.params), 0.25, places=6)

    def test_interface_matches_periodic(self):
        """
        With a = b the interface entries equal the periodic ones.
        """

        for i, j, n, m in (("up", "up", 1, 0), ("down", "up", -2, 1), ("up", "down", 0, 3)):
            interface = invk_entry(i, j, 0, n, m, self.params).value
            periodic = invk_periodic(i, j, n, m, self.params)
            self.assertAlmostEqual(interface, periodic, places=7)

    def test_uniform_collapse(self):
        """
        invk_entry(up, down) at a = b = 1 equals the uniform-lattice entry.
        """

        for n0, n, m in ((1, 1, 0), (2, 0, 1), (-1, 2, -2)):
            interface = invk_entry(Arrow.UP, Arrow.DOWN, n0, n, m, self.params).value
            self.assertAlmostEqual(interface, invk_uniform(n0 - n, -m), places=6)

    def test_default_quadrature_at_equal_weights(self):
        """
        The default quadrature reaches omega = 1 within 1e-9 at a = b without
        tripping the degeneracy guard.
        """

        self.assertAlmostEqual(invk_entry("up", "up", 1, 1, 0, self.params).value, -0.25,
                               places=6)


class TestInterfaceLattice(unittest.TestCase):
    """
    Test cases for entries, sweeps and edge statistics at (a, b) = (1, 4).
    """

    def setUp(self):
        """
        Standing weights.
        """

        self.params = WeightParams(1.0, 4.0)

    def test_entry_is_real(self):
        """
        Entries are real to quadrature accuracy.
        """

        entry = invk_entry("up", "up", 1, 2, 1, self.params)

        self.assertLess(entry.imag_residual, 1e-8)
        self.assertEqual(entry.as_row()[:5], ("up", "up", 1, 2, 1))
        self.assertEqual(len(entry.as_row()), len(INVK_HEADER))

    def test_partition_of_unity(self):
        """
        The four edge probabilities at a white vertex sum to one.
        """

        w = white(Arrow.DOWN, 0, 0)
        total = sum(edge_probability([(w, b)], self.params) for b in neighbors(w))
        self.assertAlmostEqual(total, 1.0, places=3)

    def test_sweep_order(self):
        """
        Sweeps are ordered by n then m and match single evaluations.
        """

        entries = invk_sweep("down", "up", 1, [0, 1], [0, 2], self.params, workers=1)

        self.assertEqual([(e.n, e.m) for e in entries], [(0, 0), (0, 2), (1, 0), (1, 2)])
        single = invk_entry("down", "up", 1, 1, 2, self.params)
        self.assertEqual(entries[3].value, single.value)

    def test_kernel_entry_translation(self):
        """
        kernel_entry shifts the black vertex to row 0.
        """

        w = white(Arrow.UP, 2, 3)
        b = black(Arrow.UP, 1, 1)
        expected = invk_entry("up", "up", 1, 2, 2, self.params).value
        self.assertEqual(kernel_entry(w, b, self.params), expected)

        with self.assertRaises(PreconditionError):
            kernel_entry(b, w, self.params)

    def test_shared_vertex_excludes(self):
        """
        Two edges at the same white vertex are never covered together.
        """

        w = white(Arrow.UP, 0, 0)
        first, second = neighbors(w)[:2]
        self.assertAlmostEqual(edge_probability([(w, first), (w, second)], self.params), 0.0,
                               places=12)

        p1 = edge_probability([(w, first)], self.params)
        p2 = edge_probability([(w, second)], self.params)
        self.assertAlmostEqual(edge_correlation((w, first), (w, second), self.params),
                               -p1 * p2, places=10)

    def test_edge_set_validation(self):
        """
        Empty, oversized, non-adjacent and reversed edge sets are rejected.
        """

        w = white(Arrow.UP, 0, 0)
        b = neighbors(w)[0]

        with self.assertRaises(SizeGuardError):
            edge_probability([], self.params)

        with self.assertRaises(SizeGuardError):
            edge_probability([(w, b)] * 5, self.params)

        with self.assertRaises(PreconditionError):
            edge_probability([(w, black(Arrow.UP, 5, 5))], self.params)

        with self.assertRaises(PreconditionError):
            edge_probability([(b, w)], self.params)


if __name__ == "__main__":
    unittest.main()
