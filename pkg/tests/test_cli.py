"""Unit tests for the mpolsr command line.

Author: Alberto Barrago
License: BSD 3-Clause License - 2025
"""

import io
import json
import os
import tempfile
import unittest
from contextlib import redirect_stdout

from mpolsr.cli import _split, build_parser, main
from mpolsr.config.scenario import Variant

LINE_SCENARIO = """
node_count = 4
placement = line
line_spacing_m = 200
area_width_m = 800
area_height_m = 100
duration_s = 20
warmup_s = 16
cbr_flow_count = 1
cbr_max_packets = 5
v_max = 0
"""


class TestCli(unittest.TestCase):
    def setUp(self):
        self.tmpdir = tempfile.TemporaryDirectory()
        self.scenario = os.path.join(self.tmpdir.name, "line.scenario")
        with open(self.scenario, "w", encoding="utf-8") as f:
            f.write(LINE_SCENARIO)

    def tearDown(self):
        self.tmpdir.cleanup()

    def call(self, *argv):
        out = io.StringIO()
        with redirect_stdout(out):
            code = main(list(argv))
        return code, out.getvalue()

    def test_split_lists(self):
        self.assertEqual(_split(int)("1,2,,3"), [1, 2, 3])
        self.assertEqual(_split(Variant)("olsr,re-mpolsr"), [Variant.OLSR, Variant.RE_MPOLSR])

    def test_parser_requires_a_command(self):
        with self.assertRaises(SystemExit):
            build_parser().parse_args([])

    def test_simulate_json(self):
        code, out = self.call("simulate", "--scenario", self.scenario, "--json")
        self.assertEqual(code, 0)
        report = json.loads(out)
        self.assertEqual(report["data_sent"], 5)
        self.assertEqual(report["delivery_ratio"], 1.0)

    def test_simulate_writes_trace(self):
        trace = os.path.join(self.tmpdir.name, "run.trace")
        code, out = self.call(
            "simulate", "--scenario", self.scenario, "--variant", "olsr-fb", "--trace", trace
        )
        self.assertEqual(code, 0)
        self.assertIn("olsr-fb, seed 1, 4 nodes", out)
        self.assertIn("delivery ratio:   1.0000", out)
        with open(trace, "r", encoding="utf-8") as f:
            self.assertTrue(f.read().endswith("- sim_end\n"))

    def test_sweep_writes_csv(self):
        csv_path = os.path.join(self.tmpdir.name, "sweep.csv")
        code, _ = self.call(
            "sweep",
            "--scenario", self.scenario,
            "--variants", "olsr,sr-mpolsr",
            "--speeds", "0",
            "--seeds", "1,2",
            "--out", csv_path,
        )
        self.assertEqual(code, 0)
        with open(csv_path, "r", encoding="utf-8") as f:
            self.assertEqual(len(f.read().splitlines()), 5)

    def test_routes(self):
        """Along a line every route is the same one, so nothing counts as shared."""
        code, out = self.call("routes", "--scenario", self.scenario, "--node", "0", "--dest", "3")
        self.assertEqual(code, 0)
        self.assertIn("P1: 0 -> 1 -> 2 -> 3 (cost 3)", out)
        self.assertIn("P3: 0 -> 1 -> 2 -> 3", out)
        self.assertIn("shared nodes: none", out)

    def test_errors_return_one(self):
        self.assertEqual(self.call("routes", "--scenario", self.scenario, "--node", "9", "--dest", "3")[0], 1)
        self.assertEqual(self.call("simulate", "--scenario", "missing.scenario")[0], 1)
        bad = os.path.join(self.tmpdir.name, "bad.scenario")
        with open(bad, "w", encoding="utf-8") as f:
            f.write("node_cont = 4\n")
        self.assertEqual(self.call("simulate", "--scenario", bad)[0], 1)


if __name__ == "__main__":
    unittest.main()
