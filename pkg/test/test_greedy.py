# -*- coding: utf-8 -*-

import Spanr
from Spanr import generators, greedy

import io
import unittest

from hypothesis import given, settings, strategies as st

from .strategies import graphs


class Test(unittest.TestCase):

    def test_cycle(self):
        c4 = generators.cycle(4)
        h = greedy.greedy_spanner(c4, 3)
        self.assertEqual(sorted(h.edge_ids), [0, 1, 2])
        self.assertEqual(greedy.verify_stretch(c4, h, 3), (True, None))
        self.assertEqual(greedy.verify_stretch(c4, h, 2), (False, 3))
        self.assertEqual(greedy.max_stretch(c4, h), 3.)

    def test_tree(self):
        for g in (generators.path(7), generators.star(6)):
            h = greedy.greedy_spanner(g, 3)
            self.assertEqual(len(h), g.n - 1)

    def test_complete(self):
        k6 = generators.complete(6)
        h = greedy.greedy_spanner(k6, 3)
        # stretch 3 on K_n leaves a star
        self.assertEqual(len(h), 5)
        self.assertTrue(greedy.verify_stretch(k6, h, 3)[0])
        self.assertEqual(len(greedy.greedy_spanner(k6, 1)), 15)

    def test_errors(self):
        with self.assertRaises(Spanr.InputError):
            greedy.greedy_spanner(generators.complete(3, directed=True), 3)
        with self.assertRaises(Spanr.InputError):
            greedy.greedy_spanner(generators.complete(3), .5)
        other = generators.complete(4)
        h = Spanr.Spanner.full(generators.complete(3))
        with self.assertRaises(Spanr.InputError):
            greedy.verify_stretch(other, h, 3)

    def test_metrics(self):
        c5 = generators.cycle(5)
        h = greedy.greedy_spanner(c5, 3)
        record = greedy.metrics(c5, h, lp=1.5)
        self.assertEqual(record["edges"], 5)
        self.assertEqual(record["cost"], 5.)
        self.assertEqual(record["max_stretch"], 1.)
        self.assertEqual(record["algorithm"], "greedy")
        self.assertEqual(record["lp"], 1.5)
        cut = Spanr.Spanner(c5, [0])
        self.assertIsNone(greedy.metrics(c5, cut)["max_stretch"])

    def test_spanner_file(self):
        g = generators.petersen()
        h = greedy.greedy_spanner(g, 3)
        out = io.StringIO()
        greedy.write_spanner(h, out, ["invocation: test"])
        lines = out.getvalue().splitlines()
        self.assertEqual(lines[:3],
                         ["3 0 none", "# algorithm greedy",
                          "# invocation: test"])
        back = greedy.read_spanner(g, io.StringIO(out.getvalue()))
        self.assertEqual(back.edge_ids, h.edge_ids)
        self.assertEqual(back.meta["algorithm"], "greedy")
        self.assertEqual((back.meta["k"], back.meta["r"]), (3, 0))
        with self.assertRaises(Spanr.ParseError) as ctx:
            greedy.read_spanner(g, io.StringIO("3 0 none\n99\n"))
        self.assertEqual(ctx.exception.lineno, 2)

    @settings(max_examples=40, deadline=None)
    @given(graphs(weighted=True), st.sampled_from([1, 2, 3, 5]))
    def test_greedy_is_spanner(self, g, k):
        h = greedy.greedy_spanner(g, k)
        self.assertEqual(greedy.verify_stretch(g, h, k), (True, None))
        self.assertLessEqual(greedy.max_stretch(g, h), k + 1e-9)
        self.assertLessEqual(len(h), len(g.edges))

    def test_complete_size_bound(self):
        for n in (4, 9, 16, 25, 36):
            h = greedy.greedy_spanner(generators.complete(n), 3)
            self.assertLessEqual(len(h), n ** 1.5 + n)

    @settings(max_examples=40, deadline=None)
    @given(graphs(max_n=8, weighted=True), st.sampled_from([1, 2, 3, 5]))
    def test_greedy_girth(self, g, k):
        # every cycle of the output has more than k + 1 edges
        h = greedy.greedy_spanner(g, k)
        kept = [g.edges[eid] for eid in sorted(h.edge_ids)]
        for e in kept:
            rest = Spanr.Graph(g.n, False, [f for f in kept if f != e])
            hops = Spanr.hop_distances(rest, e.tail, k)
            self.assertNotIn(e.head, hops)
