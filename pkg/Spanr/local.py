# -*- coding: utf-8 -*-

"""
# LOCAL model

Round synchronous simulator where every node runs a `NodeProgram` and may
send one message of any size to each neighbor per round. Edges are
bidirectional channels whatever their direction in the host graph.

Round 0 is a local step producing the first outboxes. Every following
round delivers the pending messages then calls every node. The simulation
halts once every node is done and nothing is in flight; `rounds_used`
counts delivery rounds.

On top of the simulator this module runs:

 + padded decompositions (geometric radii, smallest ID wins)
 + the distributed 2-spanner: per iteration a decomposition, a gather of
   `G(C)` at every cluster center, a cluster LP solve and a scatter of the
   solution, then one threshold exchange and one inclusion notification
 + the distributed fault tolerant conversion around a clustering spanner.

```python
>>> from Spanr import generators, local
>>> part = local.padded_decomposition(generators.grid(4, 4), seed=3)
>>> sorted(part.clusters)[0]
0
```
"""

import copy
import json
import math
import pickle
import logging
import collections

from Spanr import (
    InputError, SpanrError, SimulationFault, DistributedError, Graph,
    Spanner, Path2, derive_rng, hop_distances, INF
)
from Spanr.conversion import C_ITER, default_iterations, default_keep_prob
from Spanr.lp import (
    build_base_lp, solve_model, max_violation, FractionalSolution
)
from Spanr.oracle import verify_ft2_char
from Spanr.rounding import RoundingConfig

LOG = logging.getLogger(__name__)

PICKLE_PROTOCOL = 4


#############
# simulator #
#############
class NodeContext(object):
    """
    What a node knows about itself.

    Attributes:
        node (int): node id
        n (int): vertex count of the host graph
        round (int): current round
        neighbors (list): sorted neighbors in the undirected view
        out_edges (list): `(neighbor, EdgeId)` leaving the node
        in_edges (list): `(neighbor, EdgeId)` entering the node
        edges (list): incident `(EdgeId, tail, head, length, cost)`
    """

    def __init__(self, g, node, seed):
        self.node = node
        self.n = g.n
        self.seed = seed
        self.round = 0
        self.neighbors = g.neighbors(node)
        self.out_edges = list(g.out_edges(node))
        self.in_edges = list(g.in_edges(node))
        incident = set(eid for _, eid in self.out_edges + self.in_edges)
        self.edges = [(eid,) + tuple(g.edges[eid]) for eid in sorted(incident)]
        self._key = (0,)
        self._rng = None

    def enter(self, round):
        self.round = round
        self._key = (round,)
        self._rng = None

    def local(self, round):
        """Copy seen by a sub-protocol at its own round number."""
        ctx = copy.copy(self)
        ctx.round = round
        ctx._key = self._key + ("local", round)
        ctx._rng = None
        return ctx

    @property
    def rng(self):
        """Stream derived from (seed, node, round)."""
        if self._rng is None:
            self._rng = derive_rng(self.seed, self.node, *self._key)
        return self._rng


class NodeProgram(object):
    """
    Node behaviour. One instance may serve every node: all node data lives
    in the state value returned by `init`.
    """

    def init(self, ctx):
        return None

    def on_round(self, state, inbox, ctx):
        """
        Arguments:
            state (object): node state
            inbox (dict): sender -> message delivered this round
            ctx (Spanr.local.NodeContext): node context
        Returns:
            (state, outbox `dict` neighbor -> message)
        """
        return state, {}

    def done(self, state):
        return True

    def output(self, state):
        return None


def _jsonable(value):
    if isinstance(value, (set, frozenset)):
        return sorted(value)
    if isinstance(value, tuple):
        return list(value)
    raise TypeError("%r is not JSON serializable" % (value,))


class SimTrace(object):
    """
    Round by round record of a simulation.

    Attributes:
        rounds_used (int): delivery rounds
        messages (list): messages delivered per round
        bytes (list): serialized bytes delivered per round
        done (list): nodes done after each round
        outputs (dict): node -> program output
        halted (bool): `False` if `max_rounds` stopped the run
    """

    def __init__(self, max_rounds):
        self.max_rounds = max_rounds
        self.rounds_used = 0
        self.messages = []
        self.bytes = []
        self.done = []
        self.outputs = {}
        self.halted = True

    def __repr__(self):
        return "<SimTrace rounds=%d messages=%d halted=%s>" % (
            self.rounds_used, sum(self.messages), self.halted
        )

    def summary(self):
        return {
            "rounds_used": self.rounds_used,
            "max_rounds": self.max_rounds,
            "messages": sum(self.messages),
            "bytes": sum(self.bytes),
            "halted": self.halted,
        }

    def to_jsonl(self, outputs=True, **extra):
        """One JSON record per round then a summary record."""
        lines = []
        for i in range(self.rounds_used):
            lines.append(json.dumps({
                "round": i + 1, "messages": self.messages[i],
                "bytes": self.bytes[i], "done": self.done[i]
            }, sort_keys=True))
        summary = self.summary()
        summary["summary"] = True
        if outputs:
            summary["outputs"] = self.outputs
        summary.update(extra)
        lines.append(json.dumps(summary, sort_keys=True, default=_jsonable))
        return "\n".join(lines) + "\n"


def run_simulation(g, programs, max_rounds, seed=0):
    """
    Run node programs in lockstep.

    Arguments:
        g (Spanr.Graph): communication graph
        programs (Spanr.local.NodeProgram or sequence): one program for all
                                                        nodes or one per node
        max_rounds (int): hard cap on delivery rounds
        seed (int): seed of the per node, per round streams
    Returns:
        `Spanr.local.SimTrace`
    Raises:
        `Spanr.SimulationFault` on a message to a non-neighbor
    """
    n = g.n
    if isinstance(programs, NodeProgram):
        programs = [programs] * n
    programs = list(programs)
    if len(programs) != n:
        raise InputError("%d programs for %d nodes" % (len(programs), n))
    if max_rounds < 0:
        raise InputError("max_rounds=%r < 0" % max_rounds)

    adjacent = [frozenset(g.neighbors(v)) for v in range(n)]
    contexts = [NodeContext(g, v, seed) for v in range(n)]
    states = [programs[v].init(contexts[v]) for v in range(n)]
    trace = SimTrace(max_rounds)

    def step(round, inboxes):
        outgoing = {}
        for v in range(n):
            ctx = contexts[v]
            ctx.enter(round)
            states[v], outbox = programs[v].on_round(
                states[v], inboxes.get(v, {}), ctx
            )
            for w in sorted(outbox or {}):
                if w not in adjacent[v]:
                    raise SimulationFault(
                        "message to non-neighbor %r" % (w,), v, round
                    )
                outgoing.setdefault(w, {})[v] = pickle.dumps(
                    outbox[w], protocol=PICKLE_PROTOCOL
                )
        return outgoing

    outgoing = step(0, {})
    while outgoing or not all(
        programs[v].done(states[v]) for v in range(n)
    ):
        if trace.rounds_used >= max_rounds:
            trace.halted = False
            break
        trace.rounds_used += 1
        trace.messages.append(sum(len(box) for box in outgoing.values()))
        trace.bytes.append(sum(
            len(data) for box in outgoing.values() for data in box.values()
        ))
        inboxes = dict(
            (w, dict((v, pickle.loads(data)) for v, data in box.items()))
            for w, box in outgoing.items()
        )
        outgoing = step(trace.rounds_used, inboxes)
        trace.done.append(
            sum(1 for v in range(n) if programs[v].done(states[v]))
        )

    trace.outputs = dict(
        (v, programs[v].output(states[v])) for v in range(n)
    )
    LOG.debug("simulation: %r", trace)
    return trace


#########################
# padded decompositions #
#########################
Cluster = collections.namedtuple("Cluster", ["members", "center"])


class DecompositionConfig(object):
    """
    Attributes:
        p_geom (float): parameter of the geometric radii
        r_cap (int): radius cap, `ceil(c_cap ln n)` if `None`
        c_cap (float): multiplier of the default cap
    """

    def __init__(self, p_geom=.1, r_cap=None, c_cap=4.):
        if not 0. < p_geom < 1.:
            raise InputError("p_geom=%r outside (0, 1)" % p_geom)
        if r_cap is not None and r_cap < 1:
            raise InputError("r_cap=%r < 1" % r_cap)
        self.p_geom = float(p_geom)
        self.r_cap = r_cap
        self.c_cap = float(c_cap)

    def __repr__(self):
        return "<DecompositionConfig p_geom=%g r_cap=%s>" % (
            self.p_geom, self.r_cap
        )

    def radius_cap(self, n):
        if self.r_cap is not None:
            return int(self.r_cap)
        return max(1, int(math.ceil(self.c_cap * math.log(max(n, 1)))))


def draw_radius(rng, p_geom, r_cap):
    """Geometric radius on `{0, 1, ...}` clipped at `r_cap`."""
    radius = int(math.floor(math.log(1. - rng.random()) /
                            math.log(1. - p_geom)))
    return min(radius, r_cap)


def _relay(best, received):
    # keep the largest remaining hop count per ID, return what to forward
    forward = {}
    for cid, ttl in sorted(received, key=lambda item: (item[0], -item[1])):
        if ttl > best.get(cid, -1):
            best[cid] = ttl
            if ttl >= 1:
                forward[cid] = ttl - 1
    return sorted(forward.items())


class Partition(object):
    """
    Vertex clustering; a cluster id is the id of its center, which may lie
    outside the cluster.

    Attributes:
        cluster_of (dict): VertexId -> cluster id
        clusters (dict): cluster id -> `Cluster(members, center)`
    """

    def __init__(self, cluster_of):
        self.cluster_of = dict(cluster_of)
        members = collections.defaultdict(list)
        for v, cid in sorted(self.cluster_of.items()):
            members[cid].append(v)
        self.clusters = dict(
            (cid, Cluster(tuple(vs), cid)) for cid, vs in members.items()
        )
        self.trace = None
        self.radii = None

    def __repr__(self):
        return "<Partition clusters=%d>" % len(self.clusters)

    def padded(self, g, x):
        """True if `x` and its whole neighborhood share one cluster."""
        cid = self.cluster_of[x]
        return all(self.cluster_of[w] == cid for w in g.neighbors(x))

    def padded_fraction(self, g):
        vertices = g.vertices()
        if not vertices:
            return 1.
        return sum(1 for v in vertices if self.padded(g, v)) / \
            float(len(vertices))

    def weak_diameter(self, g, cid):
        """Largest host hop distance inside `members | {center}`."""
        cluster = self.clusters[cid]
        nodes = set(cluster.members) | {cluster.center}
        worst = 0
        for a in nodes:
            dist = hop_distances(g, a)
            for b in nodes:
                worst = max(worst, dist.get(b, INF))
        return worst

    def within(self, g, r_cap):
        """True if every member is at most `r_cap` hops from its center."""
        for cid, cluster in self.clusters.items():
            dist = hop_distances(g, cluster.center, r_cap)
            if any(v not in dist for v in cluster.members):
                return False
        return True


class PaddedDecompositionProgram(NodeProgram):
    """Every node floods its ID to its radius and joins the smallest ID."""

    def __init__(self, p_geom, r_cap):
        self.p_geom = p_geom
        self.r_cap = r_cap

    def init(self, ctx):
        return {"best": {}, "radius": None}

    def on_round(self, state, inbox, ctx):
        if ctx.round == 0:
            radius = draw_radius(ctx.rng, self.p_geom, self.r_cap)
            state["radius"] = radius
            state["best"] = {ctx.node: radius}
            forward = [(ctx.node, radius - 1)] if radius >= 1 else []
        else:
            received = [item for sender in sorted(inbox)
                        for item in inbox[sender]]
            forward = _relay(state["best"], received)
        if not forward:
            return state, {}
        return state, dict((w, forward) for w in ctx.neighbors)

    def output(self, state):
        return {"cluster": min(state["best"]), "radius": state["radius"]}


def padded_decomposition(g, p_geom=.1, r_cap=None, seed=0):
    """
    Sample a padded decomposition in the LOCAL model: node `u` draws
    `r_u ~ Geometric(p_geom)` clipped at `r_cap`, floods its ID `r_u` hops
    and every node joins the smallest ID it received, its own included.

    Arguments:
        g (Spanr.Graph): host graph, used undirected
        p_geom (float): geometric parameter
        r_cap (int): radius cap, `ceil(4 ln n)` if `None`
        seed (int): seed
    Returns:
        `Spanr.local.Partition` with its `trace`, `radii` and `r_cap`
    """
    cfg = DecompositionConfig(p_geom, r_cap)
    cap = cfg.radius_cap(g.n)
    trace = run_simulation(
        g, PaddedDecompositionProgram(cfg.p_geom, cap), cap, seed
    )
    partition = Partition(
        (v, out["cluster"]) for v, out in trace.outputs.items()
    )
    partition.trace = trace
    partition.radii = dict((v, out["radius"]) for v, out in
                           trace.outputs.items())
    partition.r_cap = cap
    return partition


#################
# cluster LP(C) #
#################
def cluster_graph(n, edges, members):
    """
    `G(C)`: edges of `C | N(C)` in EdgeId order; edges outside `E(C)` cost 0.

    Arguments:
        n (int): vertex count
        edges (iterable): known `(EdgeId, tail, head, length, cost)`
        members (iterable): cluster members
    Returns:
        (`Spanr.Graph`, host EdgeId of every cluster edge)
    """
    members = frozenset(members)
    edges = sorted(set(edges))
    border = set()
    for _, tail, head, _, _ in edges:
        if tail in members:
            border.add(head)
        if head in members:
            border.add(tail)
    keep = members | border
    chosen = [e for e in edges if e[1] in keep and e[2] in keep]
    gc = Graph(n, True, [
        (tail, head, length,
         cost if tail in members and head in members else 0.)
        for _, tail, head, length, cost in chosen
    ])
    return gc, [e[0] for e in chosen]


def lp_for_cluster(g, partition, cluster, r, kc_cuts=True):
    """
    Relaxation of `G(C)` where `delta(C)` and edges between two vertices of
    `N(C)` cost 0.

    Returns:
        `Spanr.lp.LpModel` with `host_ids` mapping model edges to `g`
    """
    members = partition.clusters[cluster].members
    gc, ids = cluster_graph(
        g.n, [(eid,) + tuple(e) for eid, e in enumerate(g.edges)], members
    )
    model = build_base_lp(gc, r, kc_cuts=kc_cuts)
    model.host_ids = ids
    return model


class LpCache(object):
    """
    Cluster relaxations already solved, keyed by `G(C)` and the solver
    parameters. Centers of the same cluster in different iterations, and the
    global relaxation when a cluster spans the whole graph, share one solve.
    A cache may be passed to several runs on the same graph.

    ```python
    >>> from Spanr import generators, local
    >>> cache = local.LpCache()
    >>> g = generators.complete(3, directed=True)
    >>> a = cache.solve(g, 1)
    >>> cache.solve(g, 1) is a, cache.solves, cache.hits
    (True, 1, 1)
    ```
    """

    def __init__(self):
        self._solutions = {}
        self.solves = 0
        self.hits = 0

    def __len__(self):
        return len(self._solutions)

    def solve(self, gc, r, eps=1e-7, max_cut_rounds=50, kc_cuts=True):
        key = (gc, r, eps, max_cut_rounds, kc_cuts)
        if key in self._solutions:
            self.hits += 1
            return self._solutions[key]
        sol = solve_model(build_base_lp(gc, r, kc_cuts=kc_cuts), eps,
                          max_cut_rounds)
        self.solves += 1
        self._solutions[key] = sol
        return sol


#########################
# distributed 2-spanner #
#########################
class Ft2Program(NodeProgram):
    """
    Node side of the distributed 2-spanner. Iteration `i` spans
    `3 r_cap + 1` rounds starting at `i (3 r_cap + 1)`: decomposition
    (`r_cap` rounds), gather of `G(C)` records (`r_cap + 1` rounds),
    cluster LP solve at the center and scatter (`r_cap` rounds).
    """

    def __init__(self, r, t, r_cap, p_geom, alpha, eps=1e-7,
                 max_cut_rounds=50, kc_cuts=True, cache=None):
        self.r, self.t, self.r_cap = r, t, r_cap
        self.cache = LpCache() if cache is None else cache
        self.p_geom, self.alpha = p_geom, alpha
        self.eps, self.max_cut_rounds = eps, max_cut_rounds
        self.kc_cuts = kc_cuts
        self.block = 3 * r_cap + 1
        self.rounds = t * self.block + 2

    def init(self, ctx):
        return {
            "iteration": -1, "cluster": None, "best": {}, "records": {},
            "seen": set(), "padded_now": False, "padded": 0,
            "x_sum": {}, "in_cluster": {}, "f_sum": {}, "lp": [],
            "clusters": [], "threshold": None, "x_tilde": {},
            "included": [], "notified": [], "finished": False,
        }

    def _absorb(self, state, ctx, solution):
        # store the incident part of the solution of the node's own cluster
        if solution["iteration"] != state["iteration"] or \
           solution["cluster"] != state["cluster"]:
            return
        x = solution["x"]
        for eid, _, _, _, _ in ctx.edges:
            if eid in x:
                state["x_sum"][eid] = state["x_sum"].get(eid, 0.) + x[eid]
                state["in_cluster"][eid] = state["in_cluster"].get(eid, 0) + 1
        if state["padded_now"]:
            mine = set(eid for _, eid in ctx.out_edges)
            for demand, mid, value in solution["f"]:
                if demand in mine:
                    key = (demand, mid)
                    state["f_sum"][key] = state["f_sum"].get(key, 0.) + value

    def _solve(self, state, ctx, iteration):
        members = [v for v, (cid, _) in sorted(state["records"].items())
                   if cid == ctx.node]
        if not members:
            return None
        edges = set(
            e for _, known in state["records"].values() for e in known
        )
        gc, ids = cluster_graph(ctx.n, edges, members)
        try:
            sol = self.cache.solve(gc, self.r, self.eps,
                                   self.max_cut_rounds, self.kc_cuts)
        except SpanrError as error:
            raise DistributedError(str(error), iteration, ctx.node)
        inside = set(members)
        x, f = {}, []
        for local_id, value in sorted(sol.x.items()):
            e = gc.edges[local_id]
            if e.tail in inside and e.head in inside:
                x[ids[local_id]] = value
        for (local_id, path), value in sorted(sol.f.items()):
            if ids[local_id] in x and value > 0.:
                f.append((ids[local_id], path.mid, value))
        state["lp"].append((iteration, ctx.node, sol.objective_value))
        return {
            "iteration": iteration, "cluster": ctx.node,
            "ttl": self.r_cap - 1, "x": x, "f": f,
            "value": sol.objective_value,
        }

    def on_round(self, state, inbox, ctx):
        rho, r_cap, u = ctx.round, self.r_cap, ctx.node
        ids, records, solutions, thresholds, notified = [], [], [], {}, []
        for sender in sorted(inbox):
            message = inbox[sender]
            ids.extend(message.get("ids", ()))
            records.extend(message.get("records", ()))
            solutions.extend(message.get("solutions", ()))
            if "T" in message:
                thresholds[sender] = message["T"]
            notified.extend(message.get("included", ()))

        send = {}
        relay = []
        for solution in solutions:
            key = (solution["iteration"], solution["cluster"])
            if key in state["seen"]:
                continue
            state["seen"].add(key)
            self._absorb(state, ctx, solution)
            if solution["ttl"] >= 1:
                relay.append(dict(solution, ttl=solution["ttl"] - 1))

        end = self.t * self.block
        if rho >= end:
            return self._rounding(state, ctx, rho - end, thresholds, notified)

        iteration, offset = divmod(rho, self.block)
        if offset == 0:
            radius = draw_radius(ctx.rng, self.p_geom, r_cap)
            state.update(iteration=iteration, cluster=None, records={},
                         best={u: radius}, padded_now=False)
            if radius >= 1:
                send["ids"] = [(u, radius - 1)]
        elif offset <= r_cap:
            forward = _relay(state["best"], ids)
            if forward:
                send["ids"] = forward

        if offset == r_cap:
            state["cluster"] = min(state["best"])
            state["clusters"].append(state["cluster"])
            own = (u, state["cluster"], tuple(ctx.edges))
            state["records"][u] = own[1:]
            send["records"] = [own]
        elif r_cap < offset <= 2 * r_cap + 1:
            fresh = []
            for node, cid, known in records:
                if node not in state["records"]:
                    state["records"][node] = (cid, tuple(known))
                    fresh.append((node, cid, tuple(known)))
            if fresh and offset <= 2 * r_cap:
                send["records"] = fresh

        if offset == 2 * r_cap + 1:
            cid = state["cluster"]
            state["padded_now"] = all(
                state["records"][w][0] == cid for w in ctx.neighbors
            )
            state["padded"] += int(state["padded_now"])
            solution = self._solve(state, ctx, iteration)
            if solution is not None:
                state["seen"].add((iteration, u))
                self._absorb(state, ctx, solution)
                relay.append(solution)

        if relay:
            send["solutions"] = relay
        if not send:
            return state, {}
        return state, dict((w, send) for w in ctx.neighbors)

    def _rounding(self, state, ctx, step, thresholds, notified):
        if step == 0:
            scale = 4. / self.t
            state["x_tilde"] = dict(
                (eid, min(1., scale * total))
                for eid, total in state["x_sum"].items()
            )
            state["threshold"] = ctx.rng.random()
            return state, dict(
                (w, {"T": state["threshold"]}) for w in ctx.neighbors
            )
        if step == 1:
            mine = state["threshold"]
            outbox = {}
            for v, eid in ctx.out_edges:
                bound = self.alpha * state["x_tilde"].get(eid, 0.)
                if min(mine, thresholds.get(v, 1.)) <= bound:
                    state["included"].append(eid)
                    outbox.setdefault(v, {"included": []})["included"].append(
                        eid
                    )
            return state, outbox
        state["notified"] = sorted(notified)
        state["finished"] = True
        return state, {}

    def done(self, state):
        return state["finished"]

    def output(self, state):
        return {
            "included": sorted(state["included"]),
            "notified": state["notified"],
            "x_tilde": state["x_tilde"],
            "in_cluster": state["in_cluster"],
            "padded": state["padded"],
            "f_sum": sorted(
                (demand, mid, value)
                for (demand, mid), value in state["f_sum"].items()
            ),
            "lp": state["lp"],
            "clusters": state["clusters"],
        }


def ft2_program(g, r, t=None, decomposition=None, rounding=None, c_t=4.,
                eps=1e-7, max_cut_rounds=50, kc_cuts=True, cache=None):
    """Validated `Ft2Program` with the default `t`, `r_cap` and `alpha`."""
    if not g.directed or not g.unit_lengths():
        raise InputError("distributed 2-spanner needs a directed unit "
                         "length graph")
    if r < 0 or r > g.n:
        raise InputError("fault budget r=%r outside [0, n]" % r)
    decomposition = DecompositionConfig() if decomposition is None else \
        decomposition
    rounding = RoundingConfig() if rounding is None else rounding
    if t is None:
        t = max(1, int(math.ceil(c_t * math.log(max(g.n, 2)))))
    if t < 1:
        raise InputError("t=%r < 1" % t)
    return Ft2Program(
        r, t, decomposition.radius_cap(g.n), decomposition.p_geom,
        rounding.alpha_for(g), eps, max_cut_rounds, kc_cuts, cache
    )


def distributed_ft2(g, r, t=None, seed=0, decomposition=None, rounding=None,
                    c_t=4., eps=1e-7, max_cut_rounds=50, kc_cuts=True,
                    max_rounds=None, central=True, cache=None):
    """
    Distributed O(log n) approximation of minimum cost r-fault tolerant
    2-spanner, run as one LOCAL simulation of `t (3 r_cap + 1) + 2` rounds.

    `x~_e = min(1, 4/t sum(x_e^(C,i)))` over the iterations where both
    endpoints of `e` share a cluster, then every tail rounds its out-edges
    with the thresholds exchanged in one round and notifies the head in a
    second one. The report audits the averaged solution: flows averaged over
    the iterations where the tail and its whole neighborhood share a
    cluster, the residual violation of `(x~, f~)`, `sum(c x~)` against
    `4 LP*` and the decomposed cluster LP values.

    Arguments:
        g (Spanr.Graph): directed unit length graph
        r (int): fault budget
        t (int): iterations, `ceil(c_t ln n)` if `None`
        seed (int): seed
        decomposition (Spanr.local.DecompositionConfig): padding parameters
        rounding (Spanr.rounding.RoundingConfig): `alpha` parameters
        central (bool): also solve the global relaxation for the report
        cache (Spanr.local.LpCache): solved relaxations to reuse, a fresh
                                     one by default
    Returns:
        (`Spanr.Spanner`, `Spanr.local.SimTrace`, report `dict`)
    Raises:
        `Spanr.DistributedError` if a cluster relaxation fails
    """
    program = ft2_program(g, r, t, decomposition, rounding, c_t, eps,
                          max_cut_rounds, kc_cuts, cache)
    solves = program.cache.solves
    t, r_cap, alpha = program.t, program.r_cap, program.alpha
    cap = program.rounds if max_rounds is None else max_rounds
    trace = run_simulation(g, program, cap, seed)
    if not trace.halted:
        raise SimulationFault("round cap reached before completion",
                              None, cap)

    outputs = trace.outputs
    ids = set()
    x_tilde, f_tilde, padding = {}, {}, {}
    decomposed = [0.] * t
    for u in range(g.n):
        out = outputs[u]
        ids.update(out["included"])
        for iteration, _, value in out["lp"]:
            decomposed[iteration] += value
        for v, eid in g.out_edges(u):
            x_tilde[eid] = out["x_tilde"].get(eid, 0.)
            padding[eid] = out["padded"]
        for demand, mid, value in out["f_sum"]:
            e = g.edges[demand]
            f_tilde[demand, Path2(e.tail, mid, e.head)] = \
                value / out["padded"]
    cost_tilde = sum(g.edges[eid].cost * x for eid, x in x_tilde.items())
    averaged = FractionalSolution(x_tilde, f_tilde, cost_tilde)
    h = Spanner(g, ids, algorithm="ft2-dist", k=2, r=r, seed=seed, t=t,
                r_cap=r_cap, alpha=alpha, rounds=trace.rounds_used)
    report = {
        "t": t, "r_cap": r_cap, "alpha": alpha, "seed": seed,
        "rounds": trace.rounds_used, "cost": h.cost,
        "x_tilde_cost": cost_tilde, "decomposed": decomposed,
        "residual_violation": max_violation(g, r, averaged),
        "padding_iterations": min(padding.values()) if padding else t,
        "valid": verify_ft2_char(g, h, r)[0],
    }
    if central:
        lp_value = program.cache.solve(
            g, r, eps, max_cut_rounds, kc_cuts
        ).objective_value
        report["lp_value"] = lp_value
        report["ratio"] = h.cost / lp_value if lp_value > 0. else \
            (1. if h.cost == 0. else INF)
        report["cost_within_bound"] = cost_tilde <= 4. * lp_value + 1e-6
    report["lp_solves"] = program.cache.solves - solves
    LOG.info(
        "distributed 2-spanner: %d edges in %d rounds (t=%d, r_cap=%d)",
        len(ids), trace.rounds_used, t, r_cap
    )
    return h, trace, report


###################################
# distributed conversion stand-in #
###################################
class ClusterSpannerProgram(NodeProgram):
    """
    Clustering k-spanner on undirected unit length graphs in
    `floor((k+1)/2)` rounds: min-ID flooding for the first rounds, every
    improvement adding the edge to the smallest neighbor that delivered it,
    then one edge per adjacent foreign cluster in the last round. The
    stretch is at most `2 floor((k+1)/2) - 1 <= k`.
    """

    def __init__(self, k):
        if k < 1:
            raise InputError("stretch k=%r < 1" % k)
        self.k = k
        self.rounds = int(k + 1) // 2

    def init(self, ctx):
        return {"center": ctx.node, "edges": set(), "done": False}

    def on_round(self, state, inbox, ctx):
        u = ctx.node
        if ctx.round == 0:
            return state, dict((w, state["center"]) for w in ctx.neighbors)
        if ctx.round < self.rounds:
            if inbox:
                best = min(inbox.values())
                if best < state["center"]:
                    parent = min(w for w, c in inbox.items() if c == best)
                    state["center"] = best
                    state["edges"].add((min(u, parent), max(u, parent)))
            return state, dict((w, state["center"]) for w in ctx.neighbors)
        for cid in sorted(set(inbox.values())):
            if cid != state["center"]:
                w = min(v for v, c in inbox.items() if c == cid)
                state["edges"].add((min(u, w), max(u, w)))
        state["done"] = True
        return state, {}

    def done(self, state):
        return state["done"]

    def output(self, state):
        return sorted(state["edges"])


def _check_stand_in(g):
    if g.directed:
        raise InputError("clustering spanner needs an undirected graph")
    if not g.unit_lengths():
        raise InputError("clustering spanner needs unit lengths")


def cluster_spanner(g, k):
    """
    Centralized run of the clustering spanner, usable as the base algorithm
    of `Spanr.conversion.ft_convert`.
    """
    _check_stand_in(g)
    program = ClusterSpannerProgram(k)
    trace = run_simulation(g, program, program.rounds)
    ids = set()
    for out in trace.outputs.values():
        ids.update(g.index(a, b) for a, b in out)
    return Spanner(g, ids, algorithm="cluster", k=k, r=0,
                   rounds=trace.rounds_used)


class FtConvertProgram(NodeProgram):
    """
    Fault tolerant conversion around a base program of `base.rounds`
    rounds: at the start of every iteration a node joins `J` with
    probability `keep_prob` and stays silent for the iteration.
    """

    def __init__(self, base, iterations, keep_prob):
        self.base = base
        self.iterations = iterations
        self.keep_prob = keep_prob
        self.span = base.rounds

    def init(self, ctx):
        return {"alive": False, "base": None, "edges": set(),
                "finished": False, "faulty": 0}

    def _inbox(self, inbox, iteration):
        return dict(
            (sender, message["m"]) for sender, message in inbox.items()
            if message["i"] == iteration
        )

    def on_round(self, state, inbox, ctx):
        iteration, offset = divmod(ctx.round, self.span)
        outbox = {}
        if offset == 0 and ctx.round > 0 and state["alive"]:
            state["base"], _ = self.base.on_round(
                state["base"], self._inbox(inbox, iteration - 1),
                ctx.local(self.span)
            )
            state["edges"].update(
                tuple(e) for e in self.base.output(state["base"])
            )
        if iteration >= self.iterations:
            state["finished"] = True
            return state, {}
        if offset == 0:
            state["alive"] = ctx.rng.random() >= self.keep_prob
            state["faulty"] += int(not state["alive"])
            if state["alive"]:
                local = ctx.local(0)
                state["base"] = self.base.init(local)
                state["base"], outbox = self.base.on_round(
                    state["base"], {}, local
                )
        elif state["alive"]:
            state["base"], outbox = self.base.on_round(
                state["base"], self._inbox(inbox, iteration),
                ctx.local(offset)
            )
        return state, dict(
            (w, {"i": iteration, "m": message})
            for w, message in (outbox or {}).items()
        )

    def done(self, state):
        return state["finished"]

    def output(self, state):
        return sorted(state["edges"])


def ft_convert_program(g, k, r, iterations=None, base_program=None,
                       sample_keep_prob=None, c_iter=C_ITER):
    """Validated `FtConvertProgram` around `base_program`."""
    if r < 0 or (r >= g.n and g.n > 0):
        raise InputError("fault budget r=%r must lie in [0, n)" % r)
    if base_program is None:
        _check_stand_in(g)
        base_program = ClusterSpannerProgram(k)
    if iterations is None:
        iterations = default_iterations(g.n, r, c_iter)
    if iterations < 1:
        raise InputError("iterations=%r < 1" % iterations)
    if sample_keep_prob is None:
        sample_keep_prob = default_keep_prob(r) or 0.
    return FtConvertProgram(base_program, iterations, sample_keep_prob)


def distributed_ft_convert(g, k, r, iterations=None, seed=0,
                           base_program=None, sample_keep_prob=None,
                           c_iter=C_ITER, max_rounds=None):
    """
    Distributed fault tolerant conversion: every iteration each vertex
    joins `J` on its own and the base program runs on the survivors. The
    run takes `iterations * base.rounds` rounds.

    Arguments:
        g (Spanr.Graph): undirected unit length graph
        k (int): stretch
        r (int): fault budget, `r < n`
        iterations (int): iteration count, `default_iterations` if `None`
        seed (int): seed
        base_program (Spanr.local.NodeProgram): base k-spanner program with a
                                                `rounds` attribute,
                                                `ClusterSpannerProgram(k)`
                                                if `None`
        sample_keep_prob (float): probability of joining `J`
    Returns:
        (`Spanr.Spanner`, `Spanr.local.SimTrace`)
    """
    program = ft_convert_program(g, k, r, iterations, base_program,
                                 sample_keep_prob, c_iter)
    iterations = program.iterations
    cap = iterations * program.span if max_rounds is None else max_rounds
    trace = run_simulation(g, program, cap, seed)
    if not trace.halted:
        raise SimulationFault("round cap reached before completion",
                              None, cap)
    ids = set()
    for out in trace.outputs.values():
        ids.update(g.index(a, b) for a, b in out)
    LOG.info(
        "distributed conversion k=%s r=%d: %d iterations, %d edges",
        k, r, iterations, len(ids)
    )
    h = Spanner(g, ids, algorithm="ft-dist", k=k, r=r, seed=seed,
                iterations=iterations, rounds=trace.rounds_used)
    return h, trace
