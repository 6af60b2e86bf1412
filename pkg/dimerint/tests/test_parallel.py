"""
Test suite for the core/parallel.py module

Version: 1.0.0
"""

import os
import unittest

from unittest.mock import patch

from dimerint.core.parallel import WORKERS_ENV, ordered_map, resolve_workers


def _square(x):
    return x * x


class TestResolveWorkers(unittest.TestCase):
    """
    Test cases for the worker count.
    """

    def test_explicit(self):
        """
        An explicit count wins over the environment.
        """

        with patch.dict(os.environ, {WORKERS_ENV: "8"}):
            self.assertEqual(resolve_workers(3), 3)

    def test_environment(self):
        """
        DIMER_THREADS is used when no count is given, 1 when unset.
        """

        with patch.dict(os.environ, {WORKERS_ENV: "4"}):
            self.assertEqual(resolve_workers(), 4)

        with patch.dict(os.environ, {}, clear=True):
            self.assertEqual(resolve_workers(), 1)

    def test_zero_means_all_cpus(self):
        """
        0 expands to the CPU count.
        """

        self.assertEqual(resolve_workers(0), os.cpu_count() or 1)

    def test_invalid(self):
        """
        Negative counts and non-numeric settings are rejected.
        """

        with self.assertRaises(ValueError):
            resolve_workers(-1)

        with patch.dict(os.environ, {WORKERS_ENV: "many"}):
            with self.assertRaises(ValueError):
                resolve_workers()


class TestOrderedMap(unittest.TestCase):
    """
    Test cases for the ordered map.
    """

    def test_serial(self):
        """
        One worker maps in order.
        """

        self.assertEqual(ordered_map(_square, range(5), workers=1), [0, 1, 4, 9, 16])

    def test_pool_preserves_order(self):
        """
        A process pool returns results in input order.
        """

        items = list(range(20))
        self.assertEqual(ordered_map(_square, items, workers=2), [x * x for x in items])

    def test_empty(self):
        """
        No items give no results.
        """

        self.assertEqual(ordered_map(_square, [], workers=4), [])


if __name__ == "__main__":
    unittest.main()
