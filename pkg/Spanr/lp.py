# -*- coding: utf-8 -*-

"""
Knapsack-cover relaxation of minimum cost r-fault tolerant 2-spanner.

Variables are one capacity `x_e` in `[0, 1]` per edge and one flow `f_P`
per length-2 path `P` of every demand edge. The model always carries the
capacity rows, the `x_e <= 1` multiplicity rows and the `W = {}`
knapsack-cover row of every demand. Rows for `|W| >= 1` are added lazily
by `solve_lp` from the separation oracle.

```python
>>> from Spanr import generators, lp
>>> g = generators.gap_fixture(1000, 3)
>>> round(lp.solve_lp(g, 3).objective_value, 6)
1006.0
>>> round(lp.solve_lp(g, 3, kc_cuts=False).objective_value, 6)
256.0
```
"""

import json
import logging
import collections

from Spanr import (
    InputError, SolverError, CutLoopError, length2_paths
)
from Spanr.simplex import lp_core_solve, OPTIMAL

LOG = logging.getLogger(__name__)

#: row `(r+1-|W|) x_uv + sum(f_P, P not in W) >= r+1-|W|`, `w` sorted by mid
KnapsackCoverCut = collections.namedtuple("KnapsackCoverCut", ["demand", "w"])


class FractionalSolution(object):
    """
    Solution of the relaxation.

    Attributes:
        x (dict): EdgeId -> capacity in `[0, 1]`
        f (dict): (demand EdgeId, `Spanr.Path2`) -> flow `>= 0`
        objective_value (float): `sum(c_e x_e)`
        cuts (int): materialized knapsack-cover rows with `|W| >= 1`
        rounds (int): cutting-plane rounds
        history (list): objective value of every round
    """

    def __init__(self, x, f, objective_value, cuts=0, rounds=0, history=()):
        self.x = x
        self.f = f
        self.objective_value = objective_value
        self.cuts = cuts
        self.rounds = rounds
        self.history = list(history)

    def __repr__(self):
        return "<FractionalSolution value=%.6g cuts=%d rounds=%d>" % (
            self.objective_value, self.cuts, self.rounds
        )

    def flow(self, demand, path):
        return self.f.get((demand, path), 0.)

    def to_json(self, g):
        """JSON dump with `u:v` capacity keys and `u:mid:v` flow keys."""
        return json.dumps({
            "objective": self.objective_value,
            "cuts": self.cuts,
            "rounds": self.rounds,
            "x": dict(
                ("%d:%d" % (g.edges[eid].tail, g.edges[eid].head), value)
                for eid, value in sorted(self.x.items())
            ),
            "f": dict(
                ("%d:%d:%d" % tuple(path), value)
                for (_, path), value in sorted(self.f.items())
                if value > 0.
            ),
        }, sort_keys=True)


class LpModel(object):
    """
    Variables, objective and rows of the relaxation for one graph.

    Attributes:
        graph (Spanr.Graph): directed unit length graph
        r (int): fault budget
        costs (list): objective coefficient per EdgeId
        paths (list): length-2 paths of every demand, sorted by mid
        kc_cuts (bool): `False` keeps the weak `W = {}` relaxation
        host_ids (list): EdgeId of every model edge in a host graph, if any
    """

    def __init__(self, g, r, costs=None, kc_cuts=True, aggregated=False):
        if not g.directed:
            raise InputError("relaxation needs a directed graph")
        if not g.unit_lengths():
            raise InputError("relaxation needs unit lengths")
        if r < 0:
            raise InputError("fault budget r=%r < 0" % r)
        self.graph = g
        self.r = int(r)
        self.kc_cuts = kc_cuts
        self.aggregated = aggregated
        self.host_ids = None
        m = len(g.edges)
        self.costs = [e.cost for e in g.edges] if costs is None else \
            [float(c) for c in costs]
        if len(self.costs) != m:
            raise InputError("%d costs for %d edges" % (len(self.costs), m))

        self.paths = [length2_paths(g, e.tail, e.head) for e in g.edges]
        self.f_index = {}
        for demand, paths in enumerate(self.paths):
            for path in paths:
                self.f_index[demand, path] = m + len(self.f_index)
        self.n_vars = m + len(self.f_index)

        self.rows = []
        for eid in range(m):
            self.rows.append(({eid: 1.}, "<=", 1.))
        if aggregated:
            self._aggregated_capacity()
        else:
            for (demand, path), j in sorted(self.f_index.items(),
                                            key=lambda item: item[1]):
                for eid in self._path_edges(path):
                    self.rows.append(({j: 1., eid: -1.}, "<=", 0.))

        self.cuts = []
        self._seen = set()
        for demand in range(m):
            self.add_cut(KnapsackCoverCut(demand, ()))
            if kc_cuts and len(self.paths[demand]) <= self.r:
                # every path in W: forces x_uv = 1
                self.add_cut(KnapsackCoverCut(
                    demand, tuple(self.paths[demand])
                ))

    def __repr__(self):
        return "<LpModel r=%d vars=%d rows=%d>" % (
            self.r, self.n_vars, len(self.rows) + len(self.cuts)
        )

    def _path_edges(self, path):
        g = self.graph
        return g.index(path.tail, path.mid), g.index(path.mid, path.head)

    def _aggregated_capacity(self):
        for demand, paths in enumerate(self.paths):
            load = collections.defaultdict(dict)
            for path in paths:
                for eid in self._path_edges(path):
                    load[eid][self.f_index[demand, path]] = 1.
            for eid in sorted(load):
                row = dict(load[eid])
                row[eid] = -1.
                self.rows.append((row, "<=", 0.))

    @property
    def objective(self):
        return self.costs + [0.] * (self.n_vars - len(self.costs))

    @property
    def extra_cuts(self):
        """Materialized rows with `|W| >= 1`."""
        return sum(1 for cut in self.cuts if cut.w)

    def cut_row(self, cut):
        slack = self.r + 1 - len(cut.w)
        row = {cut.demand: float(slack)}
        excluded = set(cut.w)
        for path in self.paths[cut.demand]:
            if path not in excluded:
                row[self.f_index[cut.demand, path]] = 1.
        return row, ">=", float(slack)

    def add_cut(self, cut):
        """Materialize `cut`; return `False` if it is already present."""
        if len(cut.w) > self.r:
            raise InputError("cut with |W|=%d > r=%d" % (len(cut.w), self.r))
        key = (cut.demand, tuple(p.mid for p in cut.w))
        if key in self._seen:
            return False
        self._seen.add(key)
        self.cuts.append(cut)
        return True

    def all_rows(self):
        return self.rows + [self.cut_row(cut) for cut in self.cuts]

    def solve(self, tol=1e-7):
        """Solve the materialized model with the simplex core."""
        result = lp_core_solve(self.objective, self.all_rows(), self.n_vars,
                               tol=tol)
        if result.status != OPTIMAL:
            raise SolverError(
                "relaxation solve ended with status %s" % result.status,
                dict(result.diagnostics, status=result.status)
            )
        m = len(self.graph.edges)
        x = dict(
            (eid, min(1., max(0., float(result.x[eid])))) for eid in range(m)
        )
        f = dict(
            (key, max(0., float(result.x[j])))
            for key, j in self.f_index.items()
        )
        value = sum(self.costs[eid] * x[eid] for eid in range(m))
        return FractionalSolution(x, f, value, cuts=self.extra_cuts)


def build_base_lp(g, r, costs=None, kc_cuts=True, aggregated=False):
    """
    Base model: capacity rows, multiplicity rows and the `W = {}`
    knapsack-cover row per demand. With `kc_cuts`, demands with at most `r`
    paths also get their `W = all paths` row, which fixes `x_uv = 1`.

    Arguments:
        g (Spanr.Graph): directed unit length graph
        r (int): fault budget
        costs (sequence): objective per EdgeId, edge costs by default
        kc_cuts (bool): `False` for the weak relaxation
        aggregated (bool): emit `sum(f_P, P uses e) <= x_e` capacity rows
    Returns:
        `Spanr.lp.LpModel`
    """
    return LpModel(g, r, costs, kc_cuts, aggregated)


def separation_oracle(g, r, sol, eps=1e-7):
    """
    Knapsack-cover rows violated by more than `eps`. For every demand and
    every `kappa <= min(r, |paths|)`, only `W` = the `kappa` paths of
    largest flow (ties by mid id) is tested.

    Arguments:
        g (Spanr.Graph): directed graph of the model
        r (int): fault budget
        sol (Spanr.lp.FractionalSolution): candidate solution
        eps (float): violation tolerance
    Returns:
        `list` of `Spanr.lp.KnapsackCoverCut`
    """
    cuts = []
    for demand, e in enumerate(g.edges):
        paths = length2_paths(g, e.tail, e.head)
        ranked = sorted(paths, key=lambda p: (-sol.flow(demand, p), p.mid))
        x = sol.x.get(demand, 0.)
        total = sum(sol.flow(demand, p) for p in ranked)
        removed = 0.
        for kappa in range(min(r, len(ranked)) + 1):
            if kappa:
                removed += sol.flow(demand, ranked[kappa - 1])
            slack = r + 1 - kappa
            if slack * x + (total - removed) < slack - eps:
                cuts.append(KnapsackCoverCut(demand, tuple(
                    sorted(ranked[:kappa], key=lambda p: p.mid)
                )))
    return cuts


def max_violation(g, r, sol):
    """Largest knapsack-cover or capacity violation of `sol`, at least 0."""
    worst = 0.
    for demand, e in enumerate(g.edges):
        paths = length2_paths(g, e.tail, e.head)
        flows = sorted((sol.flow(demand, p) for p in paths), reverse=True)
        x = sol.x.get(demand, 0.)
        for kappa in range(min(r, len(flows)) + 1):
            slack = r + 1 - kappa
            worst = max(worst, slack - slack * x - sum(flows[kappa:]))
        for p in paths:
            flow = sol.flow(demand, p)
            worst = max(
                worst,
                flow - sol.x.get(g.index(p.tail, p.mid), 0.),
                flow - sol.x.get(g.index(p.mid, p.head), 0.)
            )
    return worst


def solve_model(model, eps=1e-7, max_cut_rounds=50):
    """Cutting-plane loop on an existing model."""
    g, r = model.graph, model.r
    history = []
    sol = None
    for rounds in range(1, max_cut_rounds + 1):
        sol = model.solve(tol=eps)
        history.append(sol.objective_value)
        sol.rounds, sol.history = rounds, list(history)
        if not model.kc_cuts:
            return sol
        violated = separation_oracle(g, r, sol, eps)
        if not violated:
            LOG.debug(
                "relaxation r=%d: value %.6g after %d rounds, %d cuts",
                r, sol.objective_value, rounds, model.extra_cuts
            )
            return sol
        added = [cut for cut in violated if model.add_cut(cut)]
        if not added:
            raise SolverError(
                "separation returned only materialized rows",
                {"violation": max_violation(g, r, sol), "rounds": rounds}
            )
        LOG.debug("cut round %d: %d new rows", rounds, len(added))
    violation = max_violation(g, r, sol)
    raise CutLoopError(
        "%d cutting-plane rounds left violation %.3g" %
        (max_cut_rounds, violation), sol, violation
    )


def solve_lp(g, r, eps=1e-7, max_cut_rounds=50, kc_cuts=True, costs=None,
             aggregated=False):
    """
    Solve the knapsack-cover relaxation by cutting planes.

    Arguments:
        g (Spanr.Graph): directed unit length graph
        r (int): fault budget
        eps (float): tolerance of the simplex core and of the oracle
        max_cut_rounds (int): cap on solve/separate rounds
        kc_cuts (bool): `False` solves the weak `W = {}` relaxation
        costs (sequence): objective per EdgeId, edge costs by default
    Returns:
        `Spanr.lp.FractionalSolution` whose `objective_value` is LP*
    Raises:
        `Spanr.CutLoopError` if cuts are still violated after
        `max_cut_rounds` rounds
    """
    model = build_base_lp(g, r, costs, kc_cuts, aggregated)
    return solve_model(model, eps, max_cut_rounds)
