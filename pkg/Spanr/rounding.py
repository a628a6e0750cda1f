# -*- coding: utf-8 -*-

"""
Randomized vertex-threshold rounding of the knapsack-cover relaxation.

Every vertex draws a threshold `T_v` in `[0, 1]` and an edge `(u, v)` is
kept iff `min(T_u, T_v) <= alpha * x_uv`. `approx_ft2` retries fresh
thresholds until the result is a valid r-fault tolerant 2-spanner within
the cost cap; `lll_round` runs Moser-Tardos resampling on the bad events of
the bounded degree analysis.

```python
>>> from Spanr import Graph, rounding
>>> g = Graph(2, True, [(0, 1)])
>>> h, report = rounding.approx_ft2(g, 0, seed=1)
>>> sorted(h.edge_ids), report["ratio"]
([0], 1.0)
```
"""

import math
import logging

from concurrent.futures import ThreadPoolExecutor

from Spanr import (
    INF, InputError, RoundingError, Spanner, derive_rng, length2_paths
)
from Spanr.oracle import verify_ft2_char, satisfied
from Spanr.lp import solve_lp, FractionalSolution

LOG = logging.getLogger(__name__)

LOG_N = "log_n"
LOG_DELTA = "log_delta"


class ThresholdAssignment(object):
    """
    One threshold per vertex.

    Attributes:
        t (dict): VertexId -> value in `[0, 1]`
        seed (object): seed or name path the values were drawn from
    """

    def __init__(self, t, seed=None):
        for v, value in t.items():
            if not 0. <= value <= 1.:
                raise InputError("threshold %r of vertex %d outside [0, 1]" %
                                 (value, v))
        self.t = dict(t)
        self.seed = seed

    def __repr__(self):
        return "<ThresholdAssignment vertices=%d seed=%r>" % (
            len(self.t), self.seed
        )

    def __getitem__(self, v):
        return self.t[v]

    @staticmethod
    def draw(g, rng, seed=None):
        """Fresh uniform thresholds for `0..n-1` in vertex order."""
        return ThresholdAssignment(
            dict((v, rng.random()) for v in range(g.n)), seed
        )


class RoundingConfig(object):
    """
    Rounding parameters.

    Attributes:
        alpha (float): inflation, `None` to derive it from `c_alpha`
        c_alpha (float): multiplier of `ln n` or `log2 max(Delta, 2)`
        mode (str): `log_n` or `log_delta`
        max_attempts (int): threshold draws tried by `approx_ft2`
        max_resamples (int): resampling cap of `lll_round`, `10 n^2` if
                             `None`
        cost_cap_factor (float): accepted cost is at most
                                 `cost_cap_factor * alpha * LP*`
        workers (int): threads evaluating `approx_ft2` attempts
    """

    def __init__(self, alpha=None, c_alpha=3., mode=LOG_N, max_attempts=20,
                 max_resamples=None, cost_cap_factor=6., workers=1):
        if mode not in (LOG_N, LOG_DELTA):
            raise InputError("unknown rounding mode %r" % (mode,))
        if alpha is not None and alpha <= 0.:
            raise InputError("alpha=%r must be positive" % alpha)
        if c_alpha <= 0. or max_attempts < 1 or cost_cap_factor <= 0.:
            raise InputError("invalid rounding constants")
        self.alpha = alpha
        self.c_alpha = float(c_alpha)
        self.mode = mode
        self.max_attempts = int(max_attempts)
        self.max_resamples = max_resamples
        self.cost_cap_factor = float(cost_cap_factor)
        self.workers = max(1, int(workers))

    def __repr__(self):
        return "<RoundingConfig mode=%s c_alpha=%g alpha=%s>" % (
            self.mode, self.c_alpha, self.alpha
        )

    def alpha_for(self, g):
        if self.alpha is not None:
            return float(self.alpha)
        if self.mode == LOG_N:
            return self.c_alpha * math.log(max(g.n, 2))
        return self.c_alpha * math.log2(max(g.max_degree(), 2))


def _capacities(x):
    if isinstance(x, FractionalSolution):
        return x.x
    if isinstance(x, dict):
        return x
    return dict(enumerate(x))


def round_thresholds(g, x, alpha, thresholds):
    """
    Edges `(u, v)` with `min(T_u, T_v) <= alpha * x_uv`.

    Arguments:
        g (Spanr.Graph): graph
        x (dict or sequence): capacity per EdgeId
        alpha (float): inflation
        thresholds (Spanr.rounding.ThresholdAssignment or dict): `T_v`
    Returns:
        `frozenset` of EdgeIds
    """
    x = _capacities(x)
    return frozenset(
        eid for eid, e in enumerate(g.edges)
        if min(thresholds[e.tail], thresholds[e.head]) <=
        alpha * x.get(eid, 0.)
    )


def _ratio(cost, value):
    if value > 0.:
        return cost / value
    return 1. if cost == 0. else INF


def _attempt(g, r, x, alpha, seed, index):
    rng = derive_rng(seed, "attempt", index)
    thresholds = ThresholdAssignment.draw(g, rng, (seed, "attempt", index))
    ids = round_thresholds(g, x, alpha, thresholds)
    valid = verify_ft2_char(g, Spanner(g, ids), r)[0]
    return ids, valid, g.total_cost(ids)


def approx_ft2(g, r, cfg=None, seed=0, sol=None, **lp_options):
    """
    Randomized O(log n) approximation of minimum cost r-fault tolerant
    2-spanner: solve the relaxation, then draw thresholds until the rounded
    edge set passes the length-2 path characterization with cost at most
    `cost_cap_factor * alpha * LP*`.

    Arguments:
        g (Spanr.Graph): directed unit length graph
        r (int): fault budget, `r <= n`
        cfg (Spanr.rounding.RoundingConfig): rounding parameters
        seed (int): seed, attempt `i` draws from `derive_rng(seed, "attempt",
                    i)`
        sol (Spanr.lp.FractionalSolution): solved relaxation, solved here if
                                           `None`
        lp_options: forwarded to `Spanr.lp.solve_lp`
    Returns:
        (`Spanr.Spanner`, report `dict`)
    Raises:
        `Spanr.RoundingError` carrying the best attempt
    """
    cfg = RoundingConfig() if cfg is None else cfg
    if r > g.n:
        raise InputError("fault budget r=%d exceeds n=%d" % (r, g.n))
    if sol is None:
        sol = solve_lp(g, r, **lp_options)
    lp_value = sol.objective_value
    alpha = cfg.alpha_for(g)
    cap = cfg.cost_cap_factor * alpha * lp_value + 1e-9

    indexes = range(cfg.max_attempts)
    if cfg.workers > 1:
        with ThreadPoolExecutor(cfg.workers) as pool:
            attempts = list(pool.map(
                lambda i: _attempt(g, r, sol.x, alpha, seed, i), indexes
            ))
    else:
        attempts = (_attempt(g, r, sol.x, alpha, seed, i) for i in indexes)

    best = None
    for index, (ids, valid, cost) in enumerate(attempts):
        report = {
            "lp_value": lp_value, "alpha": alpha, "attempts": index + 1,
            "cost": cost, "ratio": _ratio(cost, lp_value), "seed": seed,
            "valid": valid
        }
        h = Spanner(g, ids, algorithm="ft2-lp", k=2, r=r, seed=seed,
                    alpha=alpha, lp_value=lp_value)
        if valid and cost <= cap:
            LOG.info(
                "rounding accepted attempt %d: cost %g, LP* %g", index + 1,
                cost, lp_value
            )
            return h, report
        if best is None or (valid, -cost) > (best[1]["valid"],
                                              -best[1]["cost"]):
            best = (h, report)
    raise RoundingError(
        "%d threshold draws gave no valid spanner within %g x LP*" % (
            cfg.max_attempts, cfg.cost_cap_factor * alpha
        ), best
    )


###################
# Moser-Tardos LLL #
###################
def vertex_load(g, x, alpha, thresholds, u):
    """
    `(Z_u+, Z_u-, bound)`: out-edges `(u, v)` with `T_v <= alpha x_uv`,
    in-edges `(v, u)` with `T_v <= alpha x_vu` and
    `4 alpha (sum of out x + sum of in x)`.
    """
    x = _capacities(x)
    z_plus = sum(1 for v, eid in g.out_edges(u)
                 if thresholds[v] <= alpha * x.get(eid, 0.))
    z_minus = sum(1 for v, eid in g.in_edges(u)
                  if thresholds[v] <= alpha * x.get(eid, 0.))
    load = sum(x.get(eid, 0.) for _, eid in g.out_edges(u)) + \
        sum(x.get(eid, 0.) for _, eid in g.in_edges(u))
    return z_plus, z_minus, 4. * alpha * load


class _Events(object):
    # A events are indexed by EdgeId, B events follow by VertexId

    def __init__(self, g, r, x, alpha):
        self.g, self.r, self.x, self.alpha = g, r, x, alpha
        self.m = len(g.edges)
        self.paths = [length2_paths(g, e.tail, e.head) for e in g.edges]
        self.variables = []
        for eid, e in enumerate(g.edges):
            self.variables.append(sorted(
                set(p.mid for p in self.paths[eid]) | {e.tail, e.head}
            ))
        for u in range(g.n):
            self.variables.append(sorted(
                set(v for v, _ in g.out_edges(u)) |
                set(v for v, _ in g.in_edges(u))
            ))

    def __len__(self):
        return len(self.variables)

    def name(self, index):
        if index < self.m:
            return "A", index
        return "B", index - self.m

    def occurs(self, index, thresholds, ids):
        if index < self.m:
            return not satisfied(self.g, ids, self.r, index,
                                 self.paths[index])
        z_plus, z_minus, bound = vertex_load(
            self.g, self.x, self.alpha, thresholds, index - self.m
        )
        return z_plus + z_minus > bound

    def first(self, thresholds):
        ids = round_thresholds(self.g, self.x, self.alpha, thresholds)
        for index in range(len(self)):
            if self.occurs(index, thresholds, ids):
                return index
        return None

    def dependency_degree(self):
        by_variable = {}
        for index, variables in enumerate(self.variables):
            for v in variables:
                by_variable.setdefault(v, set()).add(index)
        degree = 0
        for index, variables in enumerate(self.variables):
            sharing = set()
            for v in variables:
                sharing |= by_variable[v]
            sharing.discard(index)
            degree = max(degree, len(sharing))
        return degree


def occurring_events(g, r, x, alpha, thresholds):
    """Occurring bad events as `("A", EdgeId)` / `("B", VertexId)`."""
    events = _Events(g, r, _capacities(x), alpha)
    ids = round_thresholds(g, events.x, alpha, thresholds)
    return [
        events.name(index) for index in range(len(events))
        if events.occurs(index, thresholds, ids)
    ]


def lll_round(g, r, x, cfg=None, seed=0):
    """
    Moser-Tardos rounding for unit costs: draw all thresholds, then while a
    bad event occurs resample the variables of the lowest indexed one.

    Bad events are `A_uv` (edge `(u, v)` unsatisfied) with variables the
    midpoints of its length-2 paths plus `u` and `v`, and `B_u`
    (`Z_u+ + Z_u- > 4 alpha (sum of out x + sum of in x)`) with variables
    `N+(u) | N-(u)`.

    Arguments:
        g (Spanr.Graph): directed unit length, unit cost graph, `Delta >= 2`
        r (int): fault budget
        x (Spanr.lp.FractionalSolution or dict): feasible capacities
        cfg (Spanr.rounding.RoundingConfig): `log_delta` mode,
                                             `c_alpha = 6` by default
        seed (int): seed
    Returns:
        (`Spanr.Spanner`, trace `dict`): the trace records the event count,
        the dependency degree `d`, the events occurring on the first draw
        (`initial_events`, `initial_fraction` of all events) and every
        resampled event
    Raises:
        `Spanr.RoundingError` carrying the trace when resampling exceeds
        `max_resamples`
    """
    cfg = RoundingConfig(c_alpha=6., mode=LOG_DELTA) if cfg is None else cfg
    if any(e.cost != 1. for e in g.edges):
        raise InputError("LLL rounding needs unit costs")
    if g.max_degree() < 2:
        raise InputError("LLL rounding needs maximum degree >= 2")
    x = _capacities(x)
    alpha = cfg.alpha_for(g)
    cap = cfg.max_resamples
    if cap is None:
        cap = 10 * g.n ** 2

    events = _Events(g, r, x, alpha)
    rng = derive_rng(seed, "lll")
    thresholds = dict((v, rng.random()) for v in range(g.n))
    initial = len(occurring_events(g, r, x, alpha, thresholds))
    trace = {
        "alpha": alpha, "seed": seed, "initial_events": initial,
        "events": len(events), "d": events.dependency_degree(),
        "initial_fraction":
            initial / float(len(events)) if len(events) else 0.,
        "resampled": [], "resamples": 0,
    }

    while True:
        index = events.first(thresholds)
        if index is None:
            break
        if trace["resamples"] >= cap:
            raise RoundingError(
                "no event-free assignment after %d resamples" % cap, trace
            )
        kind, item = events.name(index)
        for v in events.variables[index]:
            thresholds[v] = rng.random()
        trace["resamples"] += 1
        trace["resampled"].append([kind, item])
        LOG.debug("resampled %s_%d", kind, item)

    ids = round_thresholds(g, x, alpha, thresholds)
    LOG.info(
        "LLL rounding: %d resamples, %d edges (alpha %.3g)",
        trace["resamples"], len(ids), alpha
    )
    h = Spanner(
        g, ids, algorithm="ft2-lll", k=2, r=r, seed=seed, alpha=alpha,
        resamples=trace["resamples"]
    )
    return h, trace
