# -*- coding: utf-8 -*-

"""
Exhaustive ground truth at desk scale: fault tolerance verification by
fault set enumeration, the length-2 path characterization for stretch 2
and exact minimum cost 2-spanners by branch and bound.

```python
>>> from Spanr import generators, oracle, Spanner
>>> k3 = generators.complete(3, directed=True)
>>> oracle.brute_optimum_ft2(k3, 1)
(6.0, (0, 1, 2, 3, 4, 5))
>>> h = Spanner(k3, [1, 2, 3, 4, 5])
>>> oracle.verify_ft2_char(k3, h, 1)
(False, 0)
>>> oracle.verify_ft(k3, h, 2, 1)[0]
False
```
"""

import math
import logging
import itertools

from concurrent.futures import ThreadPoolExecutor

from Spanr import (
    INF, InputError, BudgetError, FaultSet, dijkstra, remove_vertices,
    length2_paths
)

LOG = logging.getLogger(__name__)

#: default number of (fault set, edge) checks `verify_ft` may perform
BUDGET = 10 ** 6
#: edge count guard of `brute_optimum_ft2`
MAX_BRUTE_EDGES = 22
#: slack used when comparing real distances
TOLERANCE = 1e-9


def fault_set_count(n, r):
    """Number of vertex sets of size at most `r` among `n` vertices."""
    return sum(math.comb(n, i) for i in range(min(r, n) + 1))


def fault_sets(vertices, r):
    """Fault sets by size, then lexicographically."""
    vertices = sorted(vertices)
    for size in range(min(r, len(vertices)) + 1):
        for combo in itertools.combinations(vertices, size):
            yield FaultSet(combo)


def _violation(g, h, k, faults):
    # first edge of g stretched beyond k once `faults` fail, or None
    gf = remove_vertices(g, faults)
    hf = remove_vertices(h.graph(), faults)
    g_dist, h_dist = {}, {}
    for eid, e in enumerate(g.edges):
        if e.tail in faults or e.head in faults:
            continue
        if e.tail not in g_dist:
            g_dist[e.tail] = dijkstra(gf.adjacency, e.tail)
            h_dist[e.tail] = dijkstra(hf.adjacency, e.tail)
        d_g = g_dist[e.tail].get(e.head, INF)
        d_h = h_dist[e.tail].get(e.head, INF)
        if d_h > k * d_g + TOLERANCE:
            return eid
    return None


def _scan(g, h, k, chunk):
    for faults in chunk:
        eid = _violation(g, h, k, faults)
        if eid is not None:
            return faults, eid
    return None


def verify_ft(g, h, k, r, budget=BUDGET, workers=1, chunk=64):
    """
    Check that `h` stays a k-spanner of `g \\ F` for every fault set
    `|F| <= r`. Fault sets are enumerated by size then lexicographically and
    the first violation in that order is reported.

    Arguments:
        g (Spanr.Graph): host graph
        h (Spanr.Spanner): candidate spanner with `h.host == g`
        k (float): stretch
        r (int): fault budget
        budget (int): maximum number of (fault set, edge) checks
        workers (int): thread count scanning chunks of fault sets
    Returns:
        (`bool`, `None` or (`Spanr.FaultSet`, EdgeId))
    Raises:
        `Spanr.BudgetError` if enumeration would exceed `budget`
    """
    if h.host != g:
        raise InputError("spanner host differs from the verified graph")
    if r < 0 or k < 1:
        raise InputError("invalid stretch k=%r or fault budget r=%r" % (k, r))
    vertices = g.vertices()
    work = fault_set_count(len(vertices), r) * max(1, len(g.edges))
    if work > budget:
        raise BudgetError(
            "%d fault sets x %d edges is too large to enumerate "
            "(budget %d)" % (fault_set_count(len(vertices), r),
                             len(g.edges), budget)
        )

    sets = fault_sets(vertices, r)
    if workers > 1:
        chunks = iter(lambda: list(itertools.islice(sets, chunk)), [])
        with ThreadPoolExecutor(workers) as pool:
            for found in pool.map(lambda c: _scan(g, h, k, c), chunks):
                if found is not None:
                    return False, found
        return True, None

    for faults in sets:
        eid = _violation(g, h, k, faults)
        if eid is not None:
            LOG.debug("violation F=%r edge %d", faults, eid)
            return False, (faults, eid)
    return True, None


def _check_ft2_input(g):
    if not g.directed:
        raise InputError("stretch 2 pipeline needs a directed graph")
    if not g.unit_lengths():
        raise InputError("stretch 2 pipeline needs unit lengths")


def satisfied(g, edge_ids, r, eid, paths=None):
    """
    True if edge `eid` is in `edge_ids` or has at least `r+1` length-2
    paths inside `edge_ids`.
    """
    if eid in edge_ids:
        return True
    e = g.edges[eid]
    count = 0
    for p in length2_paths(g, e.tail, e.head) if paths is None else paths:
        if g.index(p.tail, p.mid) in edge_ids and \
           g.index(p.mid, p.head) in edge_ids:
            count += 1
            if count > r:
                return True
    return False


def verify_ft2_char(g, h, r):
    """
    Length-2 path characterization of r-fault tolerant 2-spanners: every
    edge `(u, v)` of `g` is kept or has at least `r+1` length-2 paths in `h`.

    Arguments:
        g (Spanr.Graph): directed unit length graph
        h (Spanr.Spanner): candidate spanner
        r (int): fault budget
    Returns:
        (`bool`, first unsatisfied EdgeId or `None`)
    """
    _check_ft2_input(g)
    for eid in range(len(g.edges)):
        if not satisfied(g, h.edge_ids, r, eid):
            return False, eid
    return True, None


def brute_optimum_ft2(g, r, max_edges=MAX_BRUTE_EDGES):
    """
    Exact minimum cost r-fault tolerant 2-spanner by branch and bound over
    edge inclusion. Among optima, the lexicographically least sorted EdgeId
    tuple is returned.

    Arguments:
        g (Spanr.Graph): directed unit length graph
        r (int): fault budget
    Returns:
        (`float` cost, `tuple` of EdgeIds)
    Raises:
        `Spanr.BudgetError` if `g` has more than `max_edges` edges
    """
    _check_ft2_input(g)
    m = len(g.edges)
    if m > max_edges:
        raise BudgetError(
            "%d edges exceed the exhaustive optimum guard of %d" %
            (m, max_edges)
        )

    paths = []
    for e in g.edges:
        paths.append([
            (g.index(p.tail, p.mid), g.index(p.mid, p.head))
            for p in length2_paths(g, e.tail, e.head)
        ])
    # demands whose paths use a given edge
    users = [[] for _ in range(m)]
    for demand, pairs in enumerate(paths):
        for a, b in pairs:
            users[a].append(demand)
            users[b].append(demand)
    forced = [len(pairs) <= r for pairs in paths]
    status = [None] * m
    best = [INF, None]

    def alive(demand):
        if status[demand] != 0:
            return True
        return sum(
            1 for a, b in paths[demand] if status[a] != 0 and status[b] != 0
        ) > r

    def search(i, cost, chosen):
        if cost > best[0] + TOLERANCE:
            return
        if i == m:
            candidate = tuple(chosen)
            if cost < best[0] - TOLERANCE or candidate < best[1]:
                best[0], best[1] = cost, candidate
            return
        if not forced[i]:
            status[i] = 0
            if alive(i) and all(alive(d) for d in users[i]):
                search(i + 1, cost, chosen)
        status[i] = 1
        search(i + 1, cost + g.edges[i].cost, chosen + [i])
        status[i] = None

    search(0, 0., [])
    LOG.debug("brute optimum r=%d: cost %s", r, best[0])
    return float(best[0]), best[1]
