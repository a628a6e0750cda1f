# -*- coding: utf-8 -*-

import Spanr
from Spanr import generators, oracle

import itertools
import unittest

from hypothesis import given, settings, strategies as st

from .strategies import digraphs


def brute_min(g, r):
    # plain enumeration by size, used to cross-check the branch and bound
    m = len(g.edges)
    best = (Spanr.INF, None)
    for size in range(m + 1):
        for ids in itertools.combinations(range(m), size):
            h = Spanr.Spanner(g, ids)
            if oracle.verify_ft2_char(g, h, r)[0]:
                cost = g.total_cost(ids)
                if (cost, ids) < best:
                    best = (cost, ids)
    return best


class Test(unittest.TestCase):

    def test_fault_sets(self):
        sets = list(oracle.fault_sets([2, 0, 1], 2))
        self.assertEqual(
            [sorted(f) for f in sets],
            [[], [0], [1], [2], [0, 1], [0, 2], [1, 2]]
        )
        self.assertEqual(oracle.fault_set_count(3, 2), 7)
        self.assertEqual(oracle.fault_set_count(40, 4), 102091)

    def test_K3(self):
        k3 = generators.complete(3, directed=True)
        self.assertEqual(
            oracle.brute_optimum_ft2(k3, 1), (6., (0, 1, 2, 3, 4, 5))
        )
        h = Spanr.Spanner(k3, [1, 2, 3, 4, 5])
        self.assertEqual(oracle.verify_ft2_char(k3, h, 1), (False, 0))
        self.assertEqual(oracle.verify_ft2_char(k3, h, 0), (True, None))
        ok, (faults, eid) = oracle.verify_ft(k3, h, 2, 1)
        self.assertFalse(ok)
        self.assertEqual((faults, eid), (Spanr.FaultSet([2]), 0))

    def test_missing_edge(self):
        g = generators.path(4)
        h = Spanr.Spanner(g, [0, 2])
        self.assertEqual(
            oracle.verify_ft(g, h, 3, 0), (False, (Spanr.FaultSet(), 1))
        )
        self.assertEqual(oracle.verify_ft(g, Spanr.Spanner.full(g), 1, 2),
                         (True, None))

    def test_budget(self):
        k40 = generators.complete(40)
        with self.assertRaises(Spanr.BudgetError):
            oracle.verify_ft(k40, Spanr.Spanner.full(k40), 3, 4)
        k6 = generators.complete(6, directed=True)
        with self.assertRaises(Spanr.BudgetError):
            oracle.brute_optimum_ft2(k6, 1)

    def test_input_checks(self):
        und = generators.complete(3)
        with self.assertRaises(Spanr.InputError):
            oracle.verify_ft2_char(und, Spanr.Spanner.full(und), 1)
        other = generators.complete(4)
        with self.assertRaises(Spanr.InputError):
            oracle.verify_ft(other, Spanr.Spanner.full(und), 3, 1)

    def test_workers(self):
        g = generators.cycle(6)
        h = Spanr.Spanner(g, range(5))
        serial = oracle.verify_ft(g, h, 5, 1)
        threaded = oracle.verify_ft(g, h, 5, 1, workers=3, chunk=2)
        self.assertEqual(serial, threaded)
        self.assertEqual(serial, (False, (Spanr.FaultSet([1]), 5)))

    def test_gap_fixture(self):
        g = generators.gap_fixture(1000, 3)
        cost, ids = oracle.brute_optimum_ft2(g, 3)
        self.assertEqual(cost, 1006.)
        self.assertIn(0, ids)

    @settings(max_examples=1000, deadline=None)
    @given(digraphs(max_n=8), st.integers(0, 2),
           st.randoms(use_true_random=False))
    def test_characterization_matches_enumeration(self, g, r, rnd):
        # a 2-spanner of a unit length graph keeps d_H(u, v) <= 2; half the
        # subgraphs drop a few edges from G, half are uniform subsets
        m = len(g.edges)
        for i in range(20):
            if i % 2:
                ids = [eid for eid in range(m) if rnd.random() < .5]
            else:
                drop = rnd.sample(range(m), min(m, rnd.randint(0, 3)))
                ids = sorted(set(range(m)) - set(drop))
            h = Spanr.Spanner(g, ids)
            self.assertEqual(
                oracle.verify_ft2_char(g, h, r)[0],
                oracle.verify_ft(g, h, 2, r)[0]
            )

    @settings(max_examples=25, deadline=None)
    @given(digraphs(max_n=4, costs=True), st.integers(0, 2))
    def test_brute_optimum(self, g, r):
        cost, ids = oracle.brute_optimum_ft2(g, r)
        self.assertEqual((cost, ids), brute_min(g, r))
        h = Spanr.Spanner(g, ids)
        self.assertTrue(oracle.verify_ft2_char(g, h, r)[0])
