# -*- coding: utf-8 -*-

"""
# Fault tolerant graph spanners

`Spanr` builds, verifies and experiments with r-fault tolerant spanners:

 + greedy k-spanners and the oversampling conversion for stretch k >= 3
 + the knapsack-cover LP and its randomized rounding for stretch 2
 + the Moser-Tardos bounded degree refinement
 + a LOCAL model simulator running the distributed variants.

This module holds the shared values: `Spanr.Graph`, `Spanr.Path2`,
`Spanr.FaultSet`, `Spanr.Spanner`, shortest path helpers and the edge-list
file format.

```python
>>> import Spanr
>>> g = Spanr.Graph(3, False, [(0, 1, 1, 1), (1, 2, 1, 1), (0, 2, 1, 1)])
>>> g
<Graph undirected n=3 m=3>
>>> Spanr.shortest_path_dist(g, 0, 1)
1.0
>>> Spanr.shortest_path_dist(Spanr.remove_vertices(g, [2]), 0, 1)
1.0
```
"""

import io
import math
import heapq
import random
import logging
import collections

__author__ = "Spanr developers"
# Major.minor.micro version number. The micro number is bumped for API
# changes, for new functionality, and for interim project releases. The minor
# number is bumped whenever there is a significant project release. The major
# number will be bumped when the project is feature-complete, and perhaps if
# there is a major change in the design.
__version__ = "1.0.0"

LOG = logging.getLogger(__name__)

INF = float("inf")


##############
# exceptions #
##############
class SpanrError(Exception):
    """Base class of every error raised by the package."""


class InputError(SpanrError):
    """Invalid vertex id, incompatible graph or out of range parameter."""


class ParseError(InputError):
    """
    Malformed edge-list or spanner file.

    Attributes:
        lineno (int): 1-based line number of the offending line
    """

    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = "line %d: %s" % (lineno, message)
        InputError.__init__(self, message)
        self.lineno = lineno


class BudgetError(SpanrError):
    """Exhaustive enumeration would exceed its configured budget."""


class SolverError(SpanrError):
    """
    LP core failure.

    Attributes:
        diagnostics (dict): condition number, iteration and status info
    """

    def __init__(self, message, diagnostics=None):
        SpanrError.__init__(self, message)
        self.diagnostics = diagnostics or {}


class CutLoopError(SolverError):
    """
    Cutting-plane loop ran out of rounds.

    Attributes:
        solution (Spanr.lp.FractionalSolution): last solution
        violation (float): largest remaining knapsack-cover violation
    """

    def __init__(self, message, solution=None, violation=None):
        SolverError.__init__(self, message, {"violation": violation})
        self.solution = solution
        self.violation = violation


class RoundingError(SpanrError):
    """
    Rounding gave up.

    Attributes:
        best (object): best attempt (spanner and report) or resample trace
    """

    def __init__(self, message, best=None):
        SpanrError.__init__(self, message)
        self.best = best


class ConversionError(SpanrError):
    """
    Base spanner failure inside the fault tolerant conversion.

    Attributes:
        iteration (int): index of the failing iteration
    """

    def __init__(self, message, iteration=None):
        SpanrError.__init__(self, "iteration %s: %s" % (iteration, message))
        self.iteration = iteration


class SimulationFault(SpanrError):
    """
    A node program broke the LOCAL model contract.

    Attributes:
        node (int): faulty node
        round (int): round of the fault
    """

    def __init__(self, message, node=None, round=None):
        SpanrError.__init__(
            self, "node %s round %s: %s" % (node, round, message)
        )
        self.node = node
        self.round = round


class DistributedError(SpanrError):
    """
    Cluster LP failure inside the distributed 2-spanner.

    Attributes:
        iteration (int): decomposition iteration
        cluster (int): cluster id (its center)
    """

    def __init__(self, message, iteration=None, cluster=None):
        SpanrError.__init__(
            self, "iteration %s cluster %s: %s" % (iteration, cluster, message)
        )
        self.iteration = iteration
        self.cluster = cluster


##########
# values #
##########
Edge = collections.namedtuple("Edge", ["tail", "head", "length", "cost"])

#: directed path of length exactly two
Path2 = collections.namedtuple("Path2", ["tail", "mid", "head"])


def derive_rng(seed, *names):
    """
    Return a `random.Random` stream derived from a seed and a path of names.
    The derivation is stable across interpreter runs.

    ```python
    >>> Spanr.derive_rng(7, "attempt", 3).random() == \\
    ...     Spanr.derive_rng(7, "attempt", 3).random()
    True
    ```
    """
    return random.Random(":".join(str(part) for part in (seed,) + names))


def valid_weight(value):
    """True for finite nonnegative lengths and costs."""
    return math.isfinite(value) and value >= 0.


class FaultSet(frozenset):
    """
    Set of failed vertices.

    ```python
    >>> Spanr.FaultSet([2, 0])
    <FaultSet {0, 2}>
    ```
    """

    def __repr__(self):
        return "<FaultSet {%s}>" % ", ".join("%d" % v for v in sorted(self))

    def check(self, g, r=None):
        """
        Raise `Spanr.InputError` if an id is out of range or if the set is
        larger than the fault budget `r`.
        """
        for v in self:
            g.check_vertex(v)
        if r is not None and len(self) > r:
            raise InputError("%d faults exceed budget r=%d" % (len(self), r))
        return self


class Graph(object):
    """
    Immutable weighted graph on vertices `0..n-1`. Undirected edges are
    stored once with `tail < head`; the orientation they were given in is
    remembered for `Spanr.write_graph` only.

    Attributes:
        n (int): vertex count
        directed (bool): edge direction flag
        edges (tuple): `Spanr.Edge` sequence, position is the EdgeId
        absent (frozenset): removed vertices (ids are kept)
        reversed (frozenset): EdgeIds of undirected edges given `head, tail`

    ```python
    >>> g = Spanr.Graph(3, True, [(0, 1, 1., 2.)])
    >>> g.edges
    (Edge(tail=0, head=1, length=1.0, cost=2.0),)
    >>> g.index(0, 1), g.index(1, 0)
    (0, None)
    ```
    """

    def __init__(self, n, directed=False, edges=(), absent=()):
        self.n = int(n)
        if self.n < 0:
            raise InputError("negative vertex count %r" % n)
        self.directed = bool(directed)
        self.absent = frozenset(absent)
        _edges, _index, _reversed = [], {}, []
        for edge in edges:
            tail, head, length, cost = (tuple(edge) + (1., 1.))[:4]
            tail, head = int(tail), int(head)
            length, cost = float(length), float(cost)
            self.check_vertex(tail)
            self.check_vertex(head)
            if tail == head:
                raise InputError("self-loop on vertex %d" % tail)
            if not valid_weight(length) or not valid_weight(cost):
                raise InputError(
                    "negative or non-finite weight on (%d, %d)" % (tail, head)
                )
            if not self.directed and tail > head:
                tail, head = head, tail
                _reversed.append(len(_edges))
            if (tail, head) in _index:
                raise InputError("duplicate edge (%d, %d)" % (tail, head))
            if tail in self.absent or head in self.absent:
                raise InputError(
                    "edge (%d, %d) touches an absent vertex" % (tail, head)
                )
            _index[tail, head] = len(_edges)
            _edges.append(Edge(tail, head, length, cost))
        self.edges = tuple(_edges)
        self.reversed = frozenset(_reversed)
        self._index = _index
        self._out = [[] for _ in range(self.n)]
        self._in = [[] for _ in range(self.n)]
        for eid, e in enumerate(self.edges):
            self._out[e.tail].append((e.head, eid))
            self._in[e.head].append((e.tail, eid))
            if not self.directed:
                self._out[e.head].append((e.tail, eid))
                self._in[e.tail].append((e.head, eid))
        for lst in self._out + self._in:
            lst.sort()
        self._adjacency = None

    def __repr__(self):
        return "<Graph %s n=%d m=%d%s>" % (
            "directed" if self.directed else "undirected",
            self.n, len(self.edges),
            (" absent=%d" % len(self.absent)) if self.absent else ""
        )

    def __eq__(self, other):
        return isinstance(other, Graph) and \
            (self.n, self.directed, self.edges, self.absent) == \
            (other.n, other.directed, other.edges, other.absent)

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash((self.n, self.directed, self.edges, self.absent))

    def check_vertex(self, v):
        if not (isinstance(v, int) and 0 <= v < self.n):
            raise InputError("invalid vertex id %r (n=%d)" % (v, self.n))
        return v

    def vertices(self):
        """Present vertex ids in increasing order."""
        return [v for v in range(self.n) if v not in self.absent]

    def index(self, u, v):
        """Return the EdgeId of `(u, v)` or `None`."""
        if not self.directed and u > v:
            u, v = v, u
        return self._index.get((u, v))

    def has_edge(self, u, v):
        return self.index(u, v) is not None

    def out_edges(self, v):
        """Sorted `(neighbor, EdgeId)` pairs leaving `v`."""
        return self._out[v]

    def in_edges(self, v):
        """Sorted `(neighbor, EdgeId)` pairs entering `v`."""
        return self._in[v]

    def neighbors(self, v):
        """Sorted neighbors of `v` ignoring edge direction."""
        return sorted(set(w for w, _ in self._out[v]) |
                      set(w for w, _ in self._in[v]))

    def max_degree(self):
        """Largest in or out degree."""
        if self.n == 0:
            return 0
        return max(max(len(o), len(i)) for o, i in zip(self._out, self._in))

    @property
    def adjacency(self):
        """`{vertex: [(neighbor, length), ...]}` following edge direction."""
        if self._adjacency is None:
            self._adjacency = dict(
                (v, [(w, self.edges[eid].length) for w, eid in self._out[v]])
                for v in range(self.n)
            )
        return self._adjacency

    def unit_lengths(self):
        return all(e.length == 1. for e in self.edges)

    def total_cost(self, edge_ids=None):
        ids = range(len(self.edges)) if edge_ids is None else edge_ids
        return sum(self.edges[eid].cost for eid in ids)

    def subgraph(self, edge_ids):
        """Graph on the same id space keeping only `edge_ids`."""
        return Graph(
            self.n, self.directed,
            [self.edges[eid] for eid in sorted(edge_ids)], self.absent
        )

    def to_directed(self):
        """Explicit expansion of undirected edges into two arcs."""
        if self.directed:
            return self
        arcs = []
        for e in self.edges:
            arcs.append((e.tail, e.head, e.length, e.cost))
            arcs.append((e.head, e.tail, e.length, e.cost))
        return Graph(self.n, True, arcs, self.absent)


def dijkstra(adjacency, source, target=None, bound=INF):
    """
    Single source shortest path distances on nonnegative lengths.

    Arguments:
        adjacency (dict): `{vertex: [(neighbor, length), ...]}`
        source (int): start vertex
        target (int): stop as soon as this vertex is settled
        bound (float): do not settle vertices farther than `bound`
    Returns:
        `dict` of settled vertices and their exact distance
    """
    dist = {source: 0.}
    settled = {}
    heap = [(0., source)]
    while heap:
        d, u = heapq.heappop(heap)
        if u in settled:
            continue
        if d > bound:
            break
        settled[u] = d
        if u == target:
            break
        for w, length in adjacency.get(u, ()):
            nd = d + length
            if nd < dist.get(w, INF):
                dist[w] = nd
                heapq.heappush(heap, (nd, w))
    return settled


def shortest_path_dist(g, u, v):
    """
    Length of the shortest `u -> v` path in `g`.

    ```python
    >>> g = Spanr.Graph(3, False, [(0, 1, 2, 1), (1, 2, 3, 1)])
    >>> Spanr.shortest_path_dist(g, 0, 2)
    5.0
    ```

    Arguments:
        g (Spanr.Graph): host graph
        u (int): source vertex
        v (int): target vertex
    Returns:
        `float` distance, `Spanr.INF` if unreachable
    """
    g.check_vertex(u)
    g.check_vertex(v)
    if u == v:
        return 0.
    if u in g.absent or v in g.absent:
        return INF
    return dijkstra(g.adjacency, u, target=v).get(v, INF)


def hop_distances(g, source, radius=None):
    """BFS hop counts from `source` in the undirected view of `g`."""
    dist = {source: 0}
    frontier = [source]
    while frontier and (radius is None or dist[frontier[0]] < radius):
        nxt = []
        for u in frontier:
            for w in g.neighbors(u):
                if w not in dist:
                    dist[w] = dist[u] + 1
                    nxt.append(w)
        frontier = nxt
    return dist


def remove_vertices(g, f):
    """
    Delete every edge touching the fault set `f`; removed vertices keep their
    ids and are marked absent.

    Arguments:
        g (Spanr.Graph): host graph
        f (iterable): vertex ids
    Returns:
        `Spanr.Graph`
    """
    f = FaultSet(f).check(g)
    if not f:
        return g
    return Graph(g.n, g.directed, [
        e for e in g.edges if e.tail not in f and e.head not in f
    ], g.absent | f)


def length2_paths(g, u, v):
    """
    All paths `u -> mid -> v` of exactly two edges, sorted by mid id.

    ```python
    >>> k3 = Spanr.Graph(3, True, [(a, b) for a in range(3) for b in range(3)
    ...                            if a != b])
    >>> Spanr.length2_paths(k3, 0, 1)
    [Path2(tail=0, mid=2, head=1)]
    ```
    """
    return [
        Path2(u, z, v) for z, _ in g.out_edges(u)
        if z != v and z != u and g.index(z, v) is not None
    ]


class Spanner(object):
    """
    Edge subset of a host graph plus provenance.

    Attributes:
        host (Spanr.Graph): host graph
        edge_ids (frozenset): selected EdgeIds
        meta (dict): `algorithm`, `k`, `r`, `seed` and algorithm extras
    """

    def __init__(self, host, edge_ids, **meta):
        self.host = host
        self.edge_ids = frozenset(edge_ids)
        for eid in self.edge_ids:
            if not (isinstance(eid, int) and 0 <= eid < len(host.edges)):
                raise InputError("invalid EdgeId %r" % (eid,))
        meta.setdefault("algorithm", "custom")
        meta.setdefault("k", 1)
        meta.setdefault("r", 0)
        meta.setdefault("seed", None)
        if meta["k"] < 1 or meta["r"] < 0:
            raise InputError("invalid spanner meta k=%r r=%r" % (
                meta["k"], meta["r"]
            ))
        self.meta = meta
        self._graph = None

    def __repr__(self):
        return "<Spanner %s k=%s r=%s size=%d cost=%g>" % (
            self.meta["algorithm"], self.meta["k"], self.meta["r"],
            len(self.edge_ids), self.cost
        )

    def __len__(self):
        return len(self.edge_ids)

    @staticmethod
    def full(g, **meta):
        """The host graph as a spanner of itself."""
        meta.setdefault("algorithm", "identity")
        return Spanner(g, range(len(g.edges)), **meta)

    @property
    def cost(self):
        return self.host.total_cost(self.edge_ids)

    def graph(self):
        """The spanner as a `Spanr.Graph` on the host id space."""
        if self._graph is None:
            self._graph = self.host.subgraph(self.edge_ids)
        return self._graph


##################
# edge-list file #
##################
def _number(value):
    return "%d" % value if value == int(value) else repr(value)


def _open(target, mode):
    if isinstance(target, str):
        return io.open(target, mode, encoding="utf-8"), True
    return target, False


def read_graph(source):
    """
    Read an edge-list file: header `directed|undirected <n>`, an optional
    `absent <id> ...` line, then one `tail head length cost` line per edge,
    `#` starting a comment.

    Arguments:
        source (str or stream): file path or text stream
    Returns:
        `Spanr.Graph`
    """
    stream, close = _open(source, "r")
    try:
        header, absent, edges, seen = None, (), [], {}
        for lineno, line in enumerate(stream, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            fields = line.split()
            if header is None:
                if len(fields) != 2 or \
                   fields[0] not in ("directed", "undirected"):
                    raise ParseError("bad header %r" % line, lineno)
                try:
                    header = (fields[0] == "directed", int(fields[1]))
                except ValueError:
                    raise ParseError("bad vertex count %r" % fields[1], lineno)
                if header[1] < 0:
                    raise ParseError("negative vertex count", lineno)
                continue
            directed, n = header
            if fields[0] == "absent":
                if edges or absent:
                    raise ParseError(
                        "absent line must directly follow the header", lineno
                    )
                try:
                    absent = frozenset(int(v) for v in fields[1:])
                except ValueError:
                    raise ParseError("malformed absent line", lineno)
                if not all(0 <= v < n for v in absent):
                    raise ParseError("vertex id out of range", lineno)
                continue
            if len(fields) != 4:
                raise ParseError("expected 'tail head length cost'", lineno)
            try:
                tail, head = int(fields[0]), int(fields[1])
                length, cost = float(fields[2]), float(fields[3])
            except ValueError:
                raise ParseError("malformed edge %r" % line, lineno)
            if not (0 <= tail < n and 0 <= head < n):
                raise ParseError("vertex id out of range", lineno)
            if tail == head:
                raise ParseError("self-loop on vertex %d" % tail, lineno)
            if tail in absent or head in absent:
                raise ParseError("edge touches an absent vertex", lineno)
            if not valid_weight(length) or not valid_weight(cost):
                raise ParseError("negative or non-finite weight", lineno)
            key = (tail, head) if directed or tail < head else (head, tail)
            if key in seen:
                raise ParseError(
                    "duplicate edge (%d, %d), first on line %d" % (
                        key + (seen[key],)
                    ), lineno
                )
            seen[key] = lineno
            edges.append((tail, head, length, cost))
        if header is None:
            raise ParseError("missing header")
        return Graph(header[1], header[0], edges, absent)
    finally:
        if close:
            stream.close()


def write_graph(g, target, comments=()):
    """
    Write `g` in the edge-list format. Edges keep their EdgeId order and
    undirected edges the orientation they were read in, so writing back a
    file read with `Spanr.read_graph` reproduces its edge lines.

    Arguments:
        g (Spanr.Graph): graph to write
        target (str or stream): file path or text stream
        comments (iterable): lines emitted as `#` comments after the header
    """
    stream, close = _open(target, "w")
    try:
        stream.write(
            "%s %d\n" % ("directed" if g.directed else "undirected", g.n)
        )
        if g.absent:
            stream.write(
                "absent %s\n" % " ".join("%d" % v for v in sorted(g.absent))
            )
        for comment in comments:
            stream.write("# %s\n" % comment)
        for eid, e in enumerate(g.edges):
            tail, head = (e.head, e.tail) if eid in g.reversed else \
                (e.tail, e.head)
            stream.write("%d %d %s %s\n" % (
                tail, head, _number(e.length), _number(e.cost)
            ))
    finally:
        if close:
            stream.close()
