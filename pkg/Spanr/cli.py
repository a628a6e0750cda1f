# -*- coding: utf-8 -*-

"""
# Command line

```
spanr generate complete n=5 --directed -o k5.txt
spanr build k5.txt ft2-lp -r 1 --seed 3 -o k5.spanner
spanr verify k5.txt k5.spanner -k 2 -r 1
spanr sweep complete n=8:65:8 --algorithm greedy -k 3 -o sizes.csv
spanr simulate k5.txt ft2-dist -r 1 --max-rounds 500
```

JSON goes to stdout, logs to stderr. Exit codes: 0 success, 64 usage,
65 invalid or incompatible input, 70 internal failure; `verify` exits 2 on
an invalid spanner (witness on stdout) and 3 when the check is too large.
Every written artifact embeds the invocation that produced it.
"""

import io
import os
import sys
import csv
import json
import shlex
import inspect
import logging
import argparse
import itertools

from concurrent.futures import ThreadPoolExecutor

import Spanr
from Spanr import (
    SpanrError, InputError, BudgetError, read_graph, write_graph, _number
)
from Spanr import generators
from Spanr.greedy import greedy_spanner, metrics, write_spanner, read_spanner
from Spanr.conversion import C_ITER, ft_greedy
from Spanr.oracle import verify_ft, BUDGET
from Spanr.rounding import RoundingConfig, approx_ft2, lll_round, LOG_DELTA
from Spanr import local

LOG = logging.getLogger(__name__)

EX_OK = 0
EX_INVALID = 2
EX_BUDGET = 3
EX_USAGE = 64
EX_DATAERR = 65
EX_SOFTWARE = 70

ALGORITHMS = ("greedy", "ft-greedy", "ft2-lp", "ft2-lll", "ft2-dist",
              "ft-dist")
PROGRAMS = ("decomposition", "cluster", "ft2-dist", "ft-dist")
CSV_COLUMNS = ("n", "r", "k", "size", "cost", "lp", "ratio", "rounds",
               "seed", "graph")

#: tunable constant -> (type, default)
CONSTANTS = {
    "c_iter": (float, C_ITER),
    "iterations": (int, None),
    "c_alpha": (float, None),
    "max_attempts": (int, 20),
    "max_resamples": (int, None),
    "eps": (float, 1e-7),
    "max_cut_rounds": (int, 50),
    "kc_cuts": (bool, True),
    "t": (int, None),
    "c_t": (float, 4.),
    "p_geom": (float, .1),
    "r_cap": (int, None),
    "workers": (int, 1),
}


class UsageError(SpanrError):
    """Invalid command line or experiment parameters."""


def _value(text):
    for kind in (int, float):
        try:
            return kind(text)
        except ValueError:
            pass
    return text


def parse_values(text):
    """
    Parameter values: `a,b,c`, or a `start:stop[:step]` integer range with
    an exclusive stop.

    ```python
    >>> parse_values("8:33:8")
    [8, 16, 24, 32]
    ```
    """
    if ":" in text:
        try:
            bounds = [int(part) for part in text.split(":")]
        except ValueError:
            raise UsageError("invalid range %r" % text)
        if len(bounds) not in (2, 3) or (len(bounds) == 3 and bounds[2] < 1):
            raise UsageError("invalid range %r" % text)
        return list(range(*bounds))
    return [_value(part) for part in text.split(",") if part]


def parse_params(pairs):
    """`["n=5", "prob=0.5"]` -> ordered `(name, [values])` list."""
    params = []
    for pair in pairs:
        name, sep, text = pair.partition("=")
        if not sep or not name:
            raise UsageError("parameter %r is not name=value" % pair)
        params.append((name, parse_values(text)))
    return params


class ExperimentSpec(object):
    """
    Everything needed to reproduce a run or a sweep.

    Attributes:
        generator (str): graph family of `Spanr.generators.FAMILIES`
        params (list): ordered `(name, [values])` generator parameters
        directed (bool): ask the family for a directed graph
        algorithm (str): one of `ALGORITHMS`
        k (list): stretch values
        r (list): fault budgets
        seeds (list): seeds
        constants (dict): tunable constants, see `CONSTANTS`
        output (str): output path
        lp_cache (Spanr.local.LpCache): relaxations solved so far, shared
                                        by the runs of a sweep
    """

    def __init__(self, generator=None, params=(), directed=False,
                 algorithm="greedy", k=(3,), r=(0,), seeds=(0,),
                 constants=None, output=None):
        self.generator = generator
        self.params = list(params)
        self.directed = directed
        self.algorithm = algorithm
        self.k = list(k)
        self.r = list(r)
        self.seeds = list(seeds)
        self.constants = dict(
            (name, default) for name, (_, default) in CONSTANTS.items()
        )
        self.constants.update(constants or {})
        self.output = output
        self.lp_cache = local.LpCache()

    def __repr__(self):
        return "<ExperimentSpec %s %s k=%s r=%s seeds=%d>" % (
            self.generator, self.algorithm, self.k, self.r, len(self.seeds)
        )

    def validate(self):
        """Raise `UsageError` on any parameter out of range."""
        if self.generator is not None:
            if self.generator not in generators.FAMILIES:
                raise UsageError("unknown generator %r (one of %s)" % (
                    self.generator, ", ".join(sorted(generators.FAMILIES))
                ))
            _, names = generators.FAMILIES[self.generator]
            given = [name for name, _ in self.params]
            if sorted(given) != sorted(names):
                raise UsageError("%s takes parameters %s, got %s" % (
                    self.generator, ", ".join(names) or "none",
                    ", ".join(given) or "none"
                ))
            for name, values in self.params:
                if any(not isinstance(v, (int, float)) for v in values):
                    raise UsageError("parameter %s needs numbers" % name)
            if self.directed and not self._accepts("directed"):
                raise UsageError("%s has no directed variant" %
                                 self.generator)
        if self.algorithm not in ALGORITHMS:
            raise UsageError("unknown algorithm %r (one of %s)" % (
                self.algorithm, ", ".join(ALGORITHMS)
            ))
        if any(k < 1 for k in self.k):
            raise UsageError("stretch k must be >= 1")
        if any(r < 0 for r in self.r):
            raise UsageError("fault budget r must be >= 0")
        for name, value in self.constants.items():
            if name not in CONSTANTS:
                raise UsageError("unknown constant %r" % name)
            if value is not None and CONSTANTS[name][0] is not bool and \
               value <= 0:
                raise UsageError("constant %s=%r must be positive" % (
                    name, value
                ))
        if not 0. < self.constants["p_geom"] < 1.:
            raise UsageError("p_geom must lie in (0, 1)")
        return self

    def _accepts(self, name):
        func, _ = generators.FAMILIES[self.generator]
        return name in inspect.signature(func).parameters

    def runs(self):
        """Parameter combinations in declaration order."""
        names = [name for name, _ in self.params]
        grids = [values for _, values in self.params]
        for combo in itertools.product(*grids):
            for k in self.k:
                for r in self.r:
                    for seed in self.seeds:
                        yield dict(zip(names, combo)), k, r, seed

    def describe(self, params):
        """
        Graph label of a run, parameters in family order.

        ```python
        >>> ExperimentSpec("gnp").describe({"prob": 0.5, "n": 8})
        'gnp n=8 prob=0.5'
        ```
        """
        _, names = generators.FAMILIES[self.generator]
        label = [self.generator] + [
            "%s=%s" % (name, _number(params[name])) for name in names
        ]
        if self.directed:
            label.append("directed")
        return " ".join(label)

    def graph(self, params, seed=0):
        func, _ = generators.FAMILIES[self.generator]
        kwargs = dict(params)
        if self.directed:
            kwargs["directed"] = True
        if self._accepts("seed"):
            kwargs["seed"] = seed
        return func(**kwargs)

    def run(self, g, k, r, seed):
        """
        Run the configured algorithm.

        Returns:
            (`Spanr.Spanner`, info `dict` with optional `lp`, `ratio`,
            `rounds` and `solution`)
        """
        c = self.constants
        lp_options = dict(eps=c["eps"], max_cut_rounds=c["max_cut_rounds"],
                          kc_cuts=c["kc_cuts"])
        info = {}
        if self.algorithm == "greedy":
            h = greedy_spanner(g, k)
        elif self.algorithm == "ft-greedy":
            h = ft_greedy(g, k, r, seed, c["c_iter"], c["iterations"],
                          c["workers"])
        elif self.algorithm == "ft2-lp":
            sol = self.lp_cache.solve(g, r, **lp_options)
            cfg = RoundingConfig(
                c_alpha=c["c_alpha"] or 3., max_attempts=c["max_attempts"],
                workers=c["workers"]
            )
            h, report = approx_ft2(g, r, cfg, seed, sol=sol)
            info.update(lp=report["lp_value"], ratio=report["ratio"],
                        attempts=report["attempts"], solution=sol)
        elif self.algorithm == "ft2-lll":
            sol = self.lp_cache.solve(g, r, **lp_options)
            cfg = RoundingConfig(
                c_alpha=c["c_alpha"] or 6., mode=LOG_DELTA,
                max_resamples=c["max_resamples"]
            )
            h, trace = lll_round(g, r, sol, cfg, seed)
            info.update(lp=sol.objective_value, resamples=trace["resamples"],
                        solution=sol)
            info["ratio"] = _ratio(h.cost, sol.objective_value)
        elif self.algorithm == "ft2-dist":
            h, trace, report = local.distributed_ft2(
                g, r, c["t"], seed,
                local.DecompositionConfig(c["p_geom"], c["r_cap"]),
                RoundingConfig(c_alpha=c["c_alpha"] or 3.), c["c_t"],
                cache=self.lp_cache, **lp_options
            )
            info.update(lp=report["lp_value"], ratio=report["ratio"],
                        rounds=report["rounds"])
        else:
            h, trace = local.distributed_ft_convert(
                g, k, r, c["iterations"], seed, c_iter=c["c_iter"]
            )
            info["rounds"] = trace.rounds_used
        return h, info


def _ratio(cost, value):
    if value > 0.:
        return cost / value
    return 1. if cost == 0. else float("inf")


def _constants(args):
    constants = {}
    for name, (kind, _) in CONSTANTS.items():
        value = getattr(args, name, None)
        if value is not None:
            constants[name] = value
    if getattr(args, "no_kc_cuts", False):
        constants["kc_cuts"] = False
    return constants


def invocation(argv):
    return "invocation: spanr %s" % " ".join(shlex.quote(a) for a in argv)


def _emit(record):
    sys.stdout.write(json.dumps(record, sort_keys=True, default=str) + "\n")
    sys.stdout.flush()


def _atomic_write(path, text):
    tmp = "%s.tmp" % path
    with io.open(tmp, "w", encoding="utf-8") as out:
        out.write(text)
    os.replace(tmp, path)


############
# commands #
############
def cmd_generate(args, argv):
    spec = ExperimentSpec(
        args.generator, parse_params(args.params), args.directed,
        seeds=[args.seed]
    ).validate()
    params = {}
    for name, values in spec.params:
        if len(values) != 1:
            raise UsageError("generate takes one value per parameter")
        params[name] = values[0]
    g = spec.graph(params, args.seed)
    comments = [invocation(argv)]
    if args.output:
        stream = io.StringIO()
        write_graph(g, stream, comments)
        _atomic_write(args.output, stream.getvalue())
    else:
        write_graph(g, sys.stdout, comments)
    LOG.info("generated %r", g)
    return EX_OK


def _verify(g, h, k, r, budget, workers):
    ok, witness = verify_ft(g, h, k, r, budget, workers)
    if ok:
        return {"valid": True}
    faults, eid = witness
    e = g.edges[eid]
    return {"valid": False, "faults": sorted(faults), "edge": eid,
            "tail": e.tail, "head": e.head}


def cmd_build(args, argv):
    spec = ExperimentSpec(
        algorithm=args.algorithm, k=[args.k], r=[args.r], seeds=[args.seed],
        constants=_constants(args), output=args.output
    ).validate()
    if args.until_valid and spec.algorithm not in ("ft-greedy", "ft-dist"):
        raise UsageError("--until-valid applies to ft-greedy and ft-dist")
    g = read_graph(args.graph)

    h, info = spec.run(g, args.k, args.r, args.seed)
    if args.until_valid:
        iterations = h.meta["iterations"]
        for doubling in range(args.max_doublings + 1):
            if _verify(g, h, args.k, args.r, args.budget, 1)["valid"]:
                break
            if doubling == args.max_doublings:
                raise SpanrError("no valid spanner after %d doublings" %
                                 args.max_doublings)
            iterations *= 2
            LOG.info("not fault tolerant, retrying with %d iterations",
                     iterations)
            spec.constants["iterations"] = iterations
            h, info = spec.run(g, args.k, args.r, args.seed)

    solution = info.pop("solution", None)
    if args.solution:
        if solution is None:
            raise UsageError("--solution needs ft2-lp or ft2-lll")
        _atomic_write(args.solution, solution.to_json(g) + "\n")
    if args.output:
        stream = io.StringIO()
        write_spanner(h, stream, [invocation(argv)])
        _atomic_write(args.output, stream.getvalue())
    record = metrics(g, h, **info)
    record["invocation"] = invocation(argv)[len("invocation: "):]
    _emit(record)
    return EX_OK


def cmd_verify(args, argv):
    g = read_graph(args.graph)
    h = read_spanner(g, args.spanner)
    k = h.meta["k"] if args.k is None else args.k
    r = h.meta["r"] if args.r is None else args.r
    try:
        record = _verify(g, h, k, r, args.budget, args.workers)
    except BudgetError as error:
        _emit({"valid": None, "error": "budget", "message": str(error)})
        return EX_BUDGET
    record.update(k=k, r=r)
    _emit(record)
    return EX_OK if record["valid"] else EX_INVALID


def _existing_rows(path):
    done = set()
    if not os.path.exists(path):
        return done
    with io.open(path, encoding="utf-8") as stream:
        rows = csv.DictReader(line for line in stream
                              if not line.startswith("#"))
        for row in rows:
            try:
                done.add(_key(row["graph"], row["k"], row["r"], row["seed"]))
            except (KeyError, TypeError, ValueError):
                LOG.warning("ignoring unreadable row %r", row)
    return done


def _key(graph, k, r, seed):
    # numeric fields compare by value so that 3 and 3.0 match
    return graph, float(k), int(r), _value("%s" % seed)


def _row(spec, params, k, r, seed):
    g = spec.graph(params, seed)
    h, info = spec.run(g, k, r, seed)
    return {
        "n": g.n, "r": r, "k": k, "size": len(h), "cost": h.cost,
        "lp": info.get("lp", ""), "ratio": info.get("ratio", ""),
        "rounds": info.get("rounds", ""), "seed": seed,
        "graph": spec.describe(params),
    }


def cmd_sweep(args, argv):
    spec = ExperimentSpec(
        args.generator, parse_params(args.params), args.directed,
        args.algorithm, parse_values(args.k), parse_values(args.r),
        parse_values(args.seeds), _constants(args), args.output
    ).validate()
    runs = list(spec.runs())

    resume = bool(args.output) and os.path.exists(args.output)
    done = _existing_rows(args.output) if resume else set()
    pending = []
    for params, k, r, seed in runs:
        if _key(spec.describe(params), k, r, seed) in done:
            LOG.debug("skipping %s r=%d k=%s seed=%s",
                      spec.describe(params), r, k, seed)
            continue
        pending.append((params, k, r, seed))
    LOG.info("sweep: %d runs, %d already done", len(runs),
             len(runs) - len(pending))
    if resume and not pending:
        return EX_OK

    if resume:
        stream = io.open(args.output, "a", encoding="utf-8", newline="")
    elif args.output:
        stream = io.open(args.output, "w", encoding="utf-8", newline="")
    else:
        stream = sys.stdout
    # every batch of rows follows the invocation that produced it
    stream.write("# %s\n" % invocation(argv))
    writer = csv.DictWriter(stream, CSV_COLUMNS, lineterminator="\n")
    if not resume:
        writer.writeheader()

    try:
        with ThreadPoolExecutor(max(1, args.jobs)) as pool:
            rows = pool.map(lambda run: _row(spec, *run), pending)
            for row in rows:
                writer.writerow(row)
                stream.flush()
    finally:
        if stream is not sys.stdout:
            stream.close()
    return EX_OK


def cmd_simulate(args, argv):
    g = read_graph(args.graph)
    c = dict((name, default) for name, (_, default) in CONSTANTS.items())
    c.update(_constants(args))
    if args.program == "decomposition":
        cfg = local.DecompositionConfig(c["p_geom"], c["r_cap"])
        cap = cfg.radius_cap(g.n)
        program = local.PaddedDecompositionProgram(cfg.p_geom, cap)
    elif args.program == "cluster":
        if g.directed:
            raise InputError("clustering spanner needs an undirected graph")
        program = local.ClusterSpannerProgram(args.k)
        cap = program.rounds
    elif args.program == "ft2-dist":
        program = local.ft2_program(
            g, args.r, c["t"], local.DecompositionConfig(c["p_geom"],
                                                         c["r_cap"]),
            RoundingConfig(c_alpha=c["c_alpha"] or 3.), c["c_t"], c["eps"],
            c["max_cut_rounds"], c["kc_cuts"]
        )
        cap = program.rounds
    else:
        program = local.ft_convert_program(
            g, args.k, args.r, c["iterations"], c_iter=c["c_iter"]
        )
        cap = program.iterations * program.span
    if args.max_rounds is not None:
        cap = args.max_rounds
    trace = local.run_simulation(g, program, cap, args.seed)
    sys.stdout.write(trace.to_jsonl(
        outputs=not args.no_outputs, program=args.program, seed=args.seed,
        invocation=invocation(argv)[len("invocation: "):]
    ))
    return EX_OK


##########
# parser #
##########
class ArgumentParser(argparse.ArgumentParser):
    """Parser exiting with the usage status 64."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, "%s: error: %s\n" % (self.prog, message))


def _add_constants(parser):
    group = parser.add_argument_group("constants")
    for name, (kind, default) in sorted(CONSTANTS.items()):
        if kind is bool:
            continue
        group.add_argument(
            "--%s" % name.replace("_", "-"), dest=name, type=kind,
            default=None, help="default %s" % (default,)
        )
    group.add_argument("--no-kc-cuts", action="store_true",
                       help="weak relaxation without knapsack-cover rows")


def build_parser():
    parser = ArgumentParser(
        prog="spanr", description="fault tolerant spanner toolkit"
    )
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="-v info, -vv debug (stderr)")
    parser.add_argument("--version", action="version",
                        version="%(prog)s " + Spanr.__version__)
    commands = parser.add_subparsers(dest="command", metavar="command")
    commands.required = True

    p = commands.add_parser("generate", help="write a generated graph")
    p.add_argument("generator")
    p.add_argument("params", nargs="*", metavar="name=value")
    p.add_argument("--directed", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_generate)

    p = commands.add_parser("build", help="build a spanner of a graph file")
    p.add_argument("graph")
    p.add_argument("algorithm", choices=ALGORITHMS)
    p.add_argument("-k", type=float, default=3)
    p.add_argument("-r", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", help="spanner file")
    p.add_argument("--solution", help="relaxation dump (JSON)")
    p.add_argument("--until-valid", action="store_true",
                   help="double the iteration count until verified")
    p.add_argument("--max-doublings", type=int, default=8)
    p.add_argument("--budget", type=int, default=BUDGET)
    _add_constants(p)
    p.set_defaults(func=cmd_build)

    p = commands.add_parser("verify", help="check fault tolerance")
    p.add_argument("graph")
    p.add_argument("spanner")
    p.add_argument("-k", type=float, default=None)
    p.add_argument("-r", type=int, default=None)
    p.add_argument("--budget", type=int, default=BUDGET)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_verify)

    p = commands.add_parser("sweep", help="CSV of runs over parameter ranges")
    p.add_argument("generator")
    p.add_argument("params", nargs="*", metavar="name=values")
    p.add_argument("--directed", action="store_true")
    p.add_argument("--algorithm", choices=ALGORITHMS, default="greedy")
    p.add_argument("-k", default="3")
    p.add_argument("-r", default="0")
    p.add_argument("--seeds", default="0")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("-o", "--output", help="CSV file, resumed if present")
    _add_constants(p)
    p.set_defaults(func=cmd_sweep)

    p = commands.add_parser("simulate", help="JSON-lines LOCAL model trace")
    p.add_argument("graph")
    p.add_argument("program", choices=PROGRAMS)
    p.add_argument("-k", type=int, default=3)
    p.add_argument("-r", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-rounds", type=int, default=None)
    p.add_argument("--no-outputs", action="store_true")
    _add_constants(p)
    p.set_defaults(func=cmd_simulate)
    return parser


def _k(value):
    return int(value) if value == int(value) else value


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=(logging.WARNING, logging.INFO, logging.DEBUG)[
            min(args.verbose, 2)
        ],
        format="%(levelname)s %(name)s: %(message)s"
    )
    if getattr(args, "k", None) is not None and \
       not isinstance(args.k, str):
        args.k = _k(args.k)
    try:
        return args.func(args, argv)
    except UsageError as error:
        LOG.error("%s", error)
        return EX_USAGE
    except InputError as error:
        LOG.error("%s", error)
        return EX_DATAERR
    except BudgetError as error:
        LOG.error("%s", error)
        return EX_DATAERR
    except Exception as error:
        LOG.exception("internal failure: %s", error)
        return EX_SOFTWARE
