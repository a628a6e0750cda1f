# -*- coding: utf-8 -*-

import Spanr
from Spanr import simplex

import unittest

from hypothesis import given, settings, strategies as st


class Test(unittest.TestCase):

    def test_small(self):
        res = simplex.lp_core_solve(
            [1.], [({0: 1.}, ">=", .5), ({0: 1.}, "<=", 1.)]
        )
        self.assertEqual(res.status, simplex.OPTIMAL)
        self.assertAlmostEqual(float(res.x[0]), .5, places=9)
        self.assertAlmostEqual(res.objective, .5, places=9)

    def test_two_variables(self):
        # min -x - y, x + 2y <= 4, 3x + y <= 6
        res = simplex.lp_core_solve(
            [-1., -1.],
            [({0: 1., 1: 2.}, "<=", 4.), ({0: 3., 1: 1.}, "<=", 6.)]
        )
        self.assertEqual(res.status, simplex.OPTIMAL)
        self.assertAlmostEqual(res.objective, -2.8, places=7)
        self.assertAlmostEqual(float(res.x[0]), 1.6, places=7)
        self.assertAlmostEqual(float(res.x[1]), 1.2, places=7)

    def test_equality_and_negative_rhs(self):
        # x + y == 2, -x <= -1.5 -> x >= 1.5
        res = simplex.lp_core_solve(
            [0., 1.], [({0: 1., 1: 1.}, "==", 2.), ({0: -1.}, "<=", -1.5)]
        )
        self.assertEqual(res.status, simplex.OPTIMAL)
        self.assertAlmostEqual(res.objective, 0., places=9)
        self.assertAlmostEqual(float(res.x[0]), 2., places=7)

    def test_status(self):
        self.assertEqual(simplex.lp_core_solve(
            [1.], [({0: 1.}, ">=", 2.), ({0: 1.}, "<=", 1.)]
        ).status, simplex.INFEASIBLE)
        self.assertEqual(simplex.lp_core_solve(
            [-1.], [({0: 1.}, ">=", 1.)]
        ).status, simplex.UNBOUNDED)
        self.assertEqual(simplex.lp_core_solve([1., 0.], []).status,
                         simplex.OPTIMAL)
        self.assertEqual(simplex.lp_core_solve([-1.], []).status,
                         simplex.UNBOUNDED)
        self.assertEqual(simplex.lp_core_solve(
            [-1., -1.],
            [({0: 1., 1: 2.}, "<=", 4.), ({0: 3., 1: 1.}, "<=", 6.)],
            max_iter=1
        ).status, simplex.ITERATION_LIMIT)

    def test_redundant_rows(self):
        rows = [({0: 1., 1: 1.}, "==", 1.)] * 3 + [({0: 1.}, "<=", 1.)]
        res = simplex.lp_core_solve([2., 1.], rows)
        self.assertEqual(res.status, simplex.OPTIMAL)
        self.assertAlmostEqual(res.objective, 1., places=7)

    def test_degenerate(self):
        # many rows tight at the optimum
        rows = [({0: 1., 1: float(i)}, ">=", 0.) for i in range(12)]
        rows.append(({0: 1., 1: 1.}, "<=", 1.))
        res = simplex.lp_core_solve([1., -1.], rows, bland_after=1)
        self.assertEqual(res.status, simplex.OPTIMAL)
        self.assertAlmostEqual(res.objective, -1., places=7)

    def test_slack_start(self):
        # <= rows and zero rhs >= rows start on their slacks: no phase 1
        res = simplex.lp_core_solve(
            [1., 1.], [({0: -1., 1: 1.}, ">=", 0.), ({0: 1.}, "<=", 3.)]
        )
        self.assertEqual(res.status, simplex.OPTIMAL)
        self.assertEqual(res.iterations, 0)
        self.assertEqual(res.diagnostics["columns"], 4)
        res = simplex.lp_core_solve([-1.], [({0: 1.}, "<=", 2.)])
        self.assertEqual(res.iterations, 1)
        self.assertAlmostEqual(res.objective, -2., places=9)
        # one artificial for the >= row only
        res = simplex.lp_core_solve(
            [1.], [({0: 1.}, ">=", .5), ({0: 1.}, "<=", 1.)]
        )
        self.assertEqual(res.diagnostics["columns"], 4)

    def test_errors(self):
        with self.assertRaises(Spanr.InputError):
            simplex.lp_core_solve([1.], [({3: 1.}, "<=", 1.)])
        with self.assertRaises(Spanr.InputError):
            simplex.lp_core_solve([1.], [({0: 1.}, "<", 1.)])

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4),
                              st.integers(1, 6)), min_size=1, max_size=6),
           st.integers(0, 3), st.integers(0, 3))
    def test_covering(self, rows, c0, c1):
        # min c.x over a box with covering rows matches a grid search on the
        # vertices of the feasible region
        cons = [({0: float(a), 1: float(b)}, ">=", float(rhs))
                for a, b, rhs in rows if a or b]
        cons += [({0: 1.}, "<=", 10.), ({1: 1.}, "<=", 10.)]
        res = simplex.lp_core_solve([float(c0), float(c1)], cons)
        self.assertEqual(res.status, simplex.OPTIMAL)
        x = res.x
        for coefficients, sense, rhs in cons:
            value = sum(a * x[j] for j, a in coefficients.items())
            if sense == ">=":
                self.assertGreaterEqual(value, rhs - 1e-6)
            else:
                self.assertLessEqual(value, rhs + 1e-6)
        best = min(
            c0 * a / 10. + c1 * b / 10.
            for a in range(101) for b in range(101)
            if all(sum(k * (a, b)[j] / 10. for j, k in co.items()) >=
                   rhs - 1e-9 or sense == "<="
                   for co, sense, rhs in cons)
        )
        self.assertLessEqual(res.objective, best + 1e-6)
