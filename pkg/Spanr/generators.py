# -*- coding: utf-8 -*-

"""
Deterministic graph families used by tests, the CLI and sweeps. All edges
have unit length and unit cost unless stated otherwise.

```python
>>> from Spanr import generators
>>> generators.complete(4, directed=True)
<Graph directed n=4 m=12>
>>> generators.gap_fixture(1000, 3)
<Graph directed n=5 m=7>
```
"""

from Spanr import Graph, InputError, derive_rng


def complete(n, directed=False):
    if directed:
        edges = [(a, b) for a in range(n) for b in range(n) if a != b]
    else:
        edges = [(a, b) for a in range(n) for b in range(a + 1, n)]
    return Graph(n, directed, edges)


def gnp(n, prob, seed=0, directed=False):
    """Erdos-Renyi graph, every pair (or ordered pair) kept with `prob`."""
    if not 0. <= prob <= 1.:
        raise InputError("edge probability %r outside [0, 1]" % prob)
    rng = derive_rng(seed, "gnp", n, prob, int(directed))
    edges = []
    for a in range(n):
        for b in range(n) if directed else range(a + 1, n):
            if a != b and rng.random() < prob:
                edges.append((a, b))
    return Graph(n, directed, edges)


def path(n, directed=False):
    return Graph(n, directed, [(i, i + 1) for i in range(n - 1)])


def cycle(n, directed=False):
    return Graph(n, directed, [(i, (i + 1) % n) for i in range(n)])


def star(n):
    """Undirected star, center 0 and leaves `1..n-1`."""
    return Graph(n, False, [(0, i) for i in range(1, n)])


def grid(w, h):
    """Undirected `w x h` grid, vertex `x + w*y`."""
    edges = []
    for y in range(h):
        for x in range(w):
            v = x + w * y
            if x + 1 < w:
                edges.append((v, v + 1))
            if y + 1 < h:
                edges.append((v, v + w))
    return Graph(w * h, False, edges)


def regular(n, d, directed=True):
    """Circulant graph `i -> i+1 .. i+d (mod n)`, in and out degree `d`."""
    if not 0 <= d < n:
        raise InputError("circulant degree %r needs 0 <= d < n" % d)
    edges = []
    for i in range(n):
        for j in range(1, d + 1):
            edges.append((i, (i + j) % n))
    if not directed:
        edges = set((min(a, b), max(a, b)) for a, b in edges)
        edges = sorted(edges)
    return Graph(n, directed, edges)


def petersen():
    outer = [(i, (i + 1) % 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    return Graph(10, False, outer + inner + spokes)


def gap_fixture(M, r):
    """
    Directed `u -> v` edge of cost `M` (u=0, v=1) plus `r` unit cost detours
    `u -> w_i -> v` (w_i = 2..r+1).
    """
    if r < 0 or M < 0:
        raise InputError("gap fixture needs M >= 0 and r >= 0")
    edges = [(0, 1, 1., float(M))]
    for w in range(2, r + 2):
        edges.append((0, w, 1., 1.))
        edges.append((w, 1, 1., 1.))
    return Graph(r + 2, True, edges)


#: generator name -> (callable, ordered parameter names)
FAMILIES = {
    "complete": (complete, ("n",)),
    "gnp": (gnp, ("n", "prob")),
    "grid": (grid, ("w", "h")),
    "regular": (regular, ("n", "d")),
    "gap_fixture": (gap_fixture, ("M", "r")),
    "path": (path, ("n",)),
    "cycle": (cycle, ("n",)),
    "star": (star, ("n",)),
    "petersen": (petersen, ()),
}
