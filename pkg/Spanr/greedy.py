# -*- coding: utf-8 -*-

"""
Non fault tolerant k-spanners: the greedy construction, stretch audit and
the spanner file format.

```python
>>> from Spanr import generators, greedy
>>> c4 = generators.cycle(4)
>>> h = greedy.greedy_spanner(c4, 3)
>>> sorted(h.edge_ids)
[0, 1, 2]
>>> greedy.verify_stretch(c4, h, 3)
(True, None)
>>> greedy.verify_stretch(c4, h, 2)
(False, 3)
```
"""

import json
import logging

from Spanr import (
    INF, InputError, ParseError, Spanner, dijkstra, _open, _number
)

LOG = logging.getLogger(__name__)

#: slack used when comparing real stretch bounds
TOLERANCE = 1e-9


def greedy_spanner(g, k):
    """
    Greedy k-spanner: scan edges by nondecreasing length (ties by EdgeId) and
    keep an edge iff the current spanner distance between its endpoints
    exceeds `k` times its length.

    Arguments:
        g (Spanr.Graph): undirected graph with positive lengths
        k (int): stretch, `k >= 1`
    Returns:
        `Spanr.Spanner`
    """
    if g.directed:
        raise InputError("greedy spanner needs an undirected graph")
    if k < 1:
        raise InputError("stretch k=%r < 1" % k)
    if any(e.length <= 0. for e in g.edges):
        raise InputError("greedy spanner needs positive lengths")

    adjacency = dict((v, []) for v in range(g.n))
    selected = []
    order = sorted(range(len(g.edges)), key=lambda i: (g.edges[i].length, i))
    for eid in order:
        e = g.edges[eid]
        bound = k * e.length
        d = dijkstra(adjacency, e.tail, target=e.head, bound=bound).get(
            e.head, INF
        )
        if d > bound:
            selected.append(eid)
            adjacency[e.tail].append((e.head, e.length))
            adjacency[e.head].append((e.tail, e.length))
    LOG.debug("greedy k=%s kept %d/%d edges", k, len(selected), len(g.edges))
    return Spanner(g, selected, algorithm="greedy", k=k, r=0)


def verify_stretch(g, h, k):
    """
    Check `d_h(u, v) <= k * l(u, v)` for every edge of `g`.

    Arguments:
        g (Spanr.Graph): host graph
        h (Spanr.Spanner): candidate spanner of `g`
        k (float): stretch
    Returns:
        (`bool`, witness EdgeId or `None`)
    """
    if h.host != g:
        raise InputError("spanner host differs from the verified graph")
    adjacency = h.graph().adjacency
    for eid, e in enumerate(g.edges):
        if eid in h.edge_ids:
            continue
        bound = k * e.length + TOLERANCE
        if dijkstra(adjacency, e.tail, target=e.head, bound=bound).get(
            e.head, INF
        ) > bound:
            return False, eid
    return True, None


def max_stretch(g, h):
    """Largest `d_h(u, v) / l(u, v)` over edges of `g` (`INF` if cut)."""
    adjacency = h.graph().adjacency
    worst = 1. if g.edges else 0.
    for eid, e in enumerate(g.edges):
        if eid in h.edge_ids:
            continue
        d = dijkstra(adjacency, e.tail, target=e.head).get(e.head, INF)
        if e.length == 0.:
            ratio = 1. if d == 0. else INF
        else:
            ratio = d / e.length
        worst = max(worst, ratio)
    return worst


def metrics(g, h, **extra):
    """
    JSON-ready metrics record of a spanner.

    Returns:
        `dict` with `edges`, `cost`, `max_stretch` and the spanner meta
    """
    stretch = max_stretch(g, h)
    record = {
        "edges": len(h.edge_ids),
        "cost": h.cost,
        "max_stretch": None if stretch == INF else stretch,
    }
    record.update(
        (key, value) for key, value in sorted(h.meta.items())
        if isinstance(value, (int, float, str, bool, type(None)))
    )
    record.update(extra)
    return record


def write_spanner(h, target, comments=()):
    """
    Write a spanner file: header `k r seed` then one EdgeId per line. The
    algorithm name is kept in a `# algorithm` comment.
    """
    stream, close = _open(target, "w")
    try:
        stream.write("%s %d %s\n" % (
            _number(h.meta["k"]), h.meta["r"],
            "none" if h.meta["seed"] is None else h.meta["seed"]
        ))
        stream.write("# algorithm %s\n" % h.meta["algorithm"])
        for comment in comments:
            stream.write("# %s\n" % comment)
        for eid in sorted(h.edge_ids):
            stream.write("%d\n" % eid)
    finally:
        if close:
            stream.close()


def read_spanner(g, source):
    """
    Read a spanner file written by `write_spanner` against host `g`.

    Returns:
        `Spanr.Spanner`
    """
    stream, close = _open(source, "r")
    try:
        header, algorithm, ids = None, "custom", []
        for lineno, line in enumerate(stream, 1):
            raw = line.strip()
            if raw.startswith("# algorithm "):
                algorithm = raw[len("# algorithm "):].strip()
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            fields = line.split()
            try:
                if header is None:
                    if len(fields) != 3:
                        raise ValueError(line)
                    k = float(fields[0])
                    seed = None if fields[2] == "none" else json.loads(
                        fields[2]
                    )
                    header = (int(k) if k == int(k) else k,
                              int(fields[1]), seed)
                    continue
                if len(fields) != 1:
                    raise ValueError(line)
                eid = int(fields[0])
            except ValueError:
                raise ParseError("malformed line %r" % line, lineno)
            if not 0 <= eid < len(g.edges):
                raise ParseError("EdgeId %d out of range" % eid, lineno)
            ids.append(eid)
        if header is None:
            raise ParseError("missing 'k r seed' header")
        return Spanner(
            g, ids, algorithm=algorithm, k=header[0], r=header[1],
            seed=header[2]
        )
    finally:
        if close:
            stream.close()
