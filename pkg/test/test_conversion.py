# -*- coding: utf-8 -*-

import Spanr
from Spanr import generators, conversion, oracle, greedy

import unittest


class Test(unittest.TestCase):

    def test_default_iterations(self):
        self.assertEqual(conversion.default_iterations(100, 2, 4), 148)
        self.assertEqual(conversion.default_iterations(100, 0), 1)
        self.assertEqual(conversion.default_iterations(5, 1, 4), 7)
        self.assertEqual(conversion.default_iterations(5, 1), 39)
        self.assertEqual(conversion.default_iterations(10, 1), 56)
        with self.assertRaises(Spanr.InputError):
            conversion.default_iterations(1, 1)

    def test_default_keep_prob(self):
        self.assertEqual(conversion.default_keep_prob(1), .5)
        self.assertEqual(conversion.default_keep_prob(4), .75)
        self.assertIsNone(conversion.default_keep_prob(0))

    def test_ConversionConfig(self):
        cfg = conversion.ConversionConfig(2, seed=5, c_iter=4)
        self.assertEqual(cfg.keep_prob, .5)
        self.assertEqual(cfg.rounds(100), 148)
        self.assertEqual(cfg.as_dict(100)["iterations"], 148)
        self.assertEqual(conversion.ConversionConfig(1).c_iter,
                         conversion.C_ITER)
        with self.assertRaises(Spanr.InputError):
            conversion.ConversionConfig(-1)
        with self.assertRaises(Spanr.InputError):
            conversion.ConversionConfig(2, sample_keep_prob=1.)
        with self.assertRaises(Spanr.InputError):
            conversion.ConversionConfig(2, iterations=0)

    def test_sample_faults(self):
        g = generators.complete(30)
        a = conversion.sample_faults(g, .5, 9, 3)
        self.assertEqual(a, conversion.sample_faults(g, .5, 9, 3))
        self.assertNotEqual(a, conversion.sample_faults(g, .5, 9, 4))
        self.assertEqual(conversion.sample_faults(g, 0., 9, 3), [])
        rng = Spanr.derive_rng(9, "faults", 3)
        self.assertEqual(a, [v for v in range(30) if rng.random() < .5])

    def test_survivors_per_iteration(self):
        # |V \ J| above 2n/r is rare once r >= 3
        n, r = 64, 4
        g = generators.complete(n)
        p = conversion.default_keep_prob(r)
        over = sum(
            1 for index in range(400)
            if n - len(conversion.sample_faults(g, p, 3, index)) > 2 * n / r
        )
        self.assertLessEqual(over, 20)

    def test_r0_is_base_run(self):
        g = generators.petersen()
        h = conversion.ft_greedy(g, 3, 0, seed=4)
        self.assertEqual(h.edge_ids, greedy.greedy_spanner(g, 3).edge_ids)
        self.assertEqual(h.meta["iterations"], 1)

    def test_ft_greedy_K5(self):
        k5 = generators.complete(5)
        for seed in range(5):
            h = conversion.ft_greedy(k5, 3, 1, seed=seed)
            self.assertEqual(h.meta["iterations"], 39)
            self.assertEqual(h.meta["algorithm"], "ft-greedy")
            self.assertEqual(len(h.meta["survivors"]), 39)
            self.assertTrue(h.edge_ids <= frozenset(range(10)))

    def test_validity_rate(self):
        for g in (generators.complete(5), generators.petersen()):
            valid = sum(
                1 for seed in range(100)
                if oracle.verify_ft(
                    g, conversion.ft_greedy(g, 3, 1, seed=seed), 3, 1
                )[0]
            )
            self.assertGreaterEqual(valid, 99, repr(g))

    def test_ft_greedy_verifies(self):
        g = generators.grid(3, 3)
        h = conversion.ft_greedy(g, 3, 1, seed=2, iterations=150)
        self.assertTrue(oracle.verify_ft(g, h, 3, 1)[0])

    def test_union_monotone(self):
        g = generators.gnp(10, .6, seed=4)
        previous = frozenset()
        for iterations in (1, 3, 8, 20):
            h = conversion.ft_greedy(g, 3, 2, seed=7, iterations=iterations)
            self.assertTrue(previous <= h.edge_ids)
            previous = h.edge_ids

    def test_deterministic(self):
        g = generators.gnp(12, .5, seed=1)
        a = conversion.ft_greedy(g, 3, 2, seed=7, iterations=20)
        b = conversion.ft_greedy(g, 3, 2, seed=7, iterations=20, workers=4)
        self.assertEqual(a.edge_ids, b.edge_ids)
        self.assertEqual(a.meta["survivors"], b.meta["survivors"])

    def test_errors(self):
        k4 = generators.complete(4)
        with self.assertRaises(Spanr.InputError):
            conversion.ft_greedy(k4, 2, 1)
        with self.assertRaises(Spanr.InputError):
            conversion.ft_greedy(k4, 3, 4)

        def broken(g, k):
            raise ValueError("boom")

        cfg = conversion.ConversionConfig(1, iterations=3)
        with self.assertRaises(Spanr.ConversionError) as ctx:
            conversion.ft_convert(k4, 3, cfg, broken)
        self.assertEqual(ctx.exception.iteration, 0)

    def test_custom_base(self):
        g = generators.complete(6)
        cfg = conversion.ConversionConfig(1, iterations=4, seed=1)
        h = conversion.ft_convert(g, 1, cfg, lambda g, k: Spanr.Spanner.full(g))
        self.assertLessEqual(len(h), len(g.edges))
        self.assertEqual(h.meta["p"], .5)
        self.assertEqual(h.meta["algorithm"], "ft-<lambda>")
