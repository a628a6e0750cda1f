# -*- coding: utf-8 -*-

import Spanr
from Spanr import cli, generators
from Spanr.greedy import read_spanner

import io
import os
import csv
import json
import shutil
import tempfile
import unittest
import contextlib


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = cli.main(list(argv))
    return code, out.getvalue()


def rows(text):
    return list(csv.DictReader(
        line for line in text.splitlines() if not line.startswith("#")
    ))


class Test(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.mkdtemp()
        self.addCleanup(shutil.rmtree, self.tmp)

    def path(self, name):
        return os.path.join(self.tmp, name)

    def write(self, name, g):
        Spanr.write_graph(g, self.path(name))
        return self.path(name)

    def test_parse_values(self):
        self.assertEqual(cli.parse_values("8:33:8"), [8, 16, 24, 32])
        self.assertEqual(cli.parse_values("8:8"), [])
        self.assertEqual(cli.parse_values("1,0.5,x"), [1, .5, "x"])
        self.assertEqual(cli.parse_params(["n=5", "prob=0.5"]),
                         [("n", [5]), ("prob", [.5])])
        for text in ("a:b", "1:5:0", "1:2:3:4"):
            with self.assertRaises(cli.UsageError):
                cli.parse_values(text)
        with self.assertRaises(cli.UsageError):
            cli.parse_params(["n"])

    def test_ExperimentSpec(self):
        spec = cli.ExperimentSpec("gnp", [("n", [4, 6]), ("prob", [.5])],
                                  k=[3], r=[0, 1], seeds=[0, 1]).validate()
        runs = list(spec.runs())
        self.assertEqual(len(runs), 8)
        self.assertEqual(runs[0], ({"n": 4, "prob": .5}, 3, 0, 0))
        self.assertEqual(spec.graph(runs[1][0], 1),
                         generators.gnp(4, .5, seed=1))
        for bad in (
            dict(generator="lattice"),
            dict(generator="complete", params=[("m", [3])]),
            dict(generator="petersen", directed=True),
            dict(algorithm="magic"),
            dict(k=[0]),
            dict(r=[-1]),
            dict(constants={"eps": 0.}),
            dict(constants={"p_geom": 1.5}),
            dict(constants={"gamma": 1.}),
        ):
            with self.assertRaises(cli.UsageError):
                cli.ExperimentSpec(**bad).validate()

    def test_generate(self):
        code, out = run("generate", "gap_fixture", "M=1000", "r=3")
        self.assertEqual(code, cli.EX_OK)
        self.assertEqual(out, "\n".join([
            "directed 5",
            "# invocation: spanr generate gap_fixture M=1000 r=3",
            "0 1 1 1000", "0 2 1 1", "2 1 1 1", "0 3 1 1", "3 1 1 1",
            "0 4 1 1", "4 1 1 1",
        ]) + "\n")
        code, out = run("generate", "gnp", "n=5", "prob=0")
        self.assertEqual(out.splitlines()[0], "undirected 5")
        self.assertEqual(len(Spanr.read_graph(io.StringIO(out)).edges), 0)
        target = self.path("k4.txt")
        self.assertEqual(
            run("generate", "complete", "n=4", "--directed", "-o", target),
            (cli.EX_OK, "")
        )
        self.assertEqual(Spanr.read_graph(target),
                         generators.complete(4, directed=True))
        self.assertFalse(os.path.exists(target + ".tmp"))

    def test_generate_usage(self):
        self.assertEqual(run("generate", "complete")[0], cli.EX_USAGE)
        self.assertEqual(run("generate", "complete", "n=a")[0], cli.EX_USAGE)
        self.assertEqual(run("generate", "complete", "n=3,4")[0],
                         cli.EX_USAGE)
        self.assertEqual(run("generate", "torus", "n=3")[0], cli.EX_USAGE)
        with self.assertRaises(SystemExit) as ctx:
            run("build")
        self.assertEqual(ctx.exception.code, cli.EX_USAGE)

    def test_build_greedy(self):
        graph = self.write("path.txt", generators.path(5))
        spanner = self.path("path.spanner")
        code, out = run("build", graph, "greedy", "-k", "3", "-o", spanner)
        self.assertEqual(code, cli.EX_OK)
        record = json.loads(out)
        self.assertEqual(record["edges"], 4)
        self.assertEqual(record["cost"], 4.)
        self.assertEqual(record["max_stretch"], 1.)
        self.assertEqual(record["algorithm"], "greedy")
        self.assertTrue(record["invocation"].startswith("spanr build "))
        with open(spanner) as stream:
            lines = stream.read().splitlines()
        self.assertEqual(lines[:2], ["3 0 none", "# algorithm greedy"])
        self.assertTrue(lines[2].startswith("# invocation: spanr build"))
        self.assertEqual(lines[3:], ["0", "1", "2", "3"])

    def test_build_ft2_lp(self):
        graph = self.write("gap.txt", generators.gap_fixture(1000, 3))
        spanner, solution = self.path("gap.spanner"), self.path("gap.json")
        code, out = run("build", graph, "ft2-lp", "-k", "2", "-r", "3",
                        "--seed", "5", "-o", spanner, "--solution", solution)
        self.assertEqual(code, cli.EX_OK)
        record = json.loads(out)
        self.assertAlmostEqual(record["lp"], 1006., places=5)
        self.assertEqual(record["r"], 3)
        h = read_spanner(Spanr.read_graph(graph), spanner)
        self.assertIn(0, h.edge_ids)
        self.assertEqual(h.meta["algorithm"], "ft2-lp")
        with open(solution) as stream:
            self.assertAlmostEqual(json.load(stream)["objective"], 1006.,
                                   places=5)

    def test_build_errors(self):
        graph = self.write("path.txt", generators.path(4))
        self.assertEqual(run("build", graph, "greedy", "--until-valid")[0],
                         cli.EX_USAGE)
        self.assertEqual(
            run("build", graph, "greedy", "--solution", self.path("s"))[0],
            cli.EX_USAGE
        )
        self.assertEqual(run("build", graph, "ft2-lp", "-k", "2")[0],
                         cli.EX_DATAERR)
        broken = self.path("broken.txt")
        with open(broken, "w") as stream:
            stream.write("undirected 3\n0 1 1\n")
        self.assertEqual(run("build", broken, "greedy")[0], cli.EX_DATAERR)

    def test_build_until_valid(self):
        graph = self.write("k5.txt", generators.complete(5))
        code, out = run("build", graph, "ft-greedy", "-k", "3", "-r", "1",
                        "--iterations", "30", "--until-valid")
        self.assertEqual(code, cli.EX_OK)
        self.assertGreaterEqual(json.loads(out)["iterations"], 30)

    def test_verify(self):
        graph = self.write("path.txt", generators.path(4))
        spanner = self.path("path.spanner")
        run("build", graph, "greedy", "-o", spanner)
        code, out = run("verify", graph, spanner)
        self.assertEqual(code, cli.EX_OK)
        self.assertEqual(json.loads(out), {"valid": True, "k": 3, "r": 0})
        partial = self.path("partial.spanner")
        with open(partial, "w") as stream:
            stream.write("3 0 none\n0\n2\n")
        code, out = run("verify", graph, partial)
        self.assertEqual(code, cli.EX_INVALID)
        self.assertEqual(json.loads(out), {
            "valid": False, "faults": [], "edge": 1, "tail": 1, "head": 2,
            "k": 3, "r": 0
        })

    def test_verify_budget(self):
        k40 = generators.complete(40)
        graph = self.write("k40.txt", k40)
        spanner = self.path("k40.spanner")
        with open(spanner, "w") as stream:
            stream.write("3 4 none\n")
            stream.write("".join("%d\n" % eid for eid in range(780)))
        code, out = run("verify", graph, spanner)
        self.assertEqual(code, cli.EX_BUDGET)
        record = json.loads(out)
        self.assertIsNone(record["valid"])
        self.assertEqual(record["error"], "budget")

    def test_sweep_empty(self):
        code, out = run("sweep", "complete", "n=8:8")
        self.assertEqual(code, cli.EX_OK)
        self.assertEqual(out.splitlines(), [
            "# invocation: spanr sweep complete n=8:8",
            "n,r,k,size,cost,lp,ratio,rounds,seed,graph",
        ])

    def test_sweep(self):
        code, out = run("sweep", "complete", "n=3:7", "-k", "3", "--jobs",
                        "2")
        self.assertEqual(code, cli.EX_OK)
        table = rows(out)
        self.assertEqual([row["n"] for row in table], ["3", "4", "5", "6"])
        self.assertEqual([int(row["size"]) for row in table], [2, 3, 4, 5])
        self.assertEqual(table[0]["lp"], "")
        self.assertEqual(table[0]["graph"], "complete n=3")

    def test_sweep_resume(self):
        target = self.path("sizes.csv")
        run("sweep", "complete", "n=3:5", "-o", target)
        code, out = run("sweep", "complete", "n=3:7", "-o", target)
        self.assertEqual((code, out), (cli.EX_OK, ""))
        with open(target) as stream:
            text = stream.read()
        comments = [line for line in text.splitlines()
                    if line.startswith("#")]
        self.assertEqual(comments, [
            "# invocation: spanr sweep complete n=3:5 -o %s" % target,
            "# invocation: spanr sweep complete n=3:7 -o %s" % target,
        ])
        self.assertEqual([row["n"] for row in rows(text)],
                         ["3", "4", "5", "6"])
        # nothing left to run: the file is untouched
        self.assertEqual(run("sweep", "complete", "n=3:7", "-k", "3.0", "-o",
                             target), (cli.EX_OK, ""))
        with open(target) as stream:
            self.assertEqual(stream.read(), text)

    def test_sweep_resume_new_parameter(self):
        target = self.path("gnp.csv")
        run("sweep", "gnp", "n=8", "prob=0.2", "-o", target)
        run("sweep", "gnp", "n=8", "prob=0.2,0.9", "-o", target)
        with open(target) as stream:
            table = rows(stream.read())
        self.assertEqual([row["graph"] for row in table],
                         ["gnp n=8 prob=0.2", "gnp n=8 prob=0.9"])

    def test_sweep_lp(self):
        code, out = run("sweep", "gap_fixture", "M=10,1000", "r=1",
                        "--algorithm", "ft2-lp", "-k", "2", "-r", "1")
        self.assertEqual(code, cli.EX_OK)
        table = rows(out)
        self.assertEqual([float(row["lp"]) for row in table], [12., 1002.])
        self.assertEqual([float(row["ratio"]) for row in table], [1., 1.])

    def test_simulate(self):
        graph = self.write("petersen.txt", generators.petersen())
        code, out = run("simulate", graph, "cluster", "-k", "3")
        self.assertEqual(code, cli.EX_OK)
        lines = [json.loads(line) for line in out.splitlines()]
        self.assertEqual(len(lines), 3)
        self.assertEqual([line["round"] for line in lines[:2]], [1, 2])
        summary = lines[-1]
        self.assertTrue(summary["summary"])
        self.assertEqual(summary["program"], "cluster")
        self.assertEqual(summary["rounds_used"], 2)
        self.assertEqual(len(summary["outputs"]), 10)
        code, out = run("simulate", graph, "decomposition", "--r-cap", "3",
                        "--no-outputs")
        summary = json.loads(out.splitlines()[-1])
        self.assertTrue(summary["halted"])
        self.assertLessEqual(summary["rounds_used"], 3)
        self.assertNotIn("outputs", summary)

    def test_simulate_ft2(self):
        graph = self.write("k3.txt", generators.complete(3, directed=True))
        code, out = run("simulate", graph, "ft2-dist", "-r", "1", "--t", "1",
                        "--r-cap", "1")
        self.assertEqual(code, cli.EX_OK)
        summary = json.loads(out.splitlines()[-1])
        self.assertEqual(summary["rounds_used"], 6)
        self.assertEqual(run("simulate", graph, "cluster")[0],
                         cli.EX_DATAERR)
