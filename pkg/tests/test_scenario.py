"""Unit tests for scenario files, validation and presets.

Author: Alberto Barrago
License: BSD 3-Clause License - 2025
"""

import os
import tempfile
import unittest

from mpolsr.config.scenario import (
    Scenario,
    Variant,
    dense_mdc_scenario,
    desk_scenario,
    dump_scenario,
    load_scenario,
    reference_scenario,
    parse_scenario,
    suggest_key,
)
from mpolsr.errors import InvalidScenario, ScenarioParseError


class TestParseScenario(unittest.TestCase):
    def test_values_override_defaults(self):
        text = """
        # small static line
        node_count = 5
        placement = line   # trailing comment
        variant = olsr-fb
        seed = 0x10
        v_max = 0
        """
        scenario = parse_scenario(text)
        self.assertEqual(scenario.node_count, 5)
        self.assertEqual(scenario.placement, "line")
        self.assertIs(scenario.variant, Variant.OLSR_FB)
        self.assertEqual(scenario.seed, 16)
        self.assertEqual(scenario.v_max, 0.0)
        self.assertEqual(scenario.duration_s, Scenario().duration_s)

    def test_unknown_key_suggests_closest(self):
        with self.assertRaises(ScenarioParseError) as ctx:
            parse_scenario("node_count = 4\nnode_cuont = 5\n")
        self.assertEqual(ctx.exception.line, 2)
        self.assertEqual(ctx.exception.key, "node_cuont")
        self.assertEqual(ctx.exception.suggestion, "node_count")
        self.assertIn("did you mean 'node_count'", str(ctx.exception))

    def test_nothing_close_to_suggest(self):
        self.assertIsNone(suggest_key("zzzzzzzz"))

    def test_bad_value(self):
        with self.assertRaises(ScenarioParseError) as ctx:
            parse_scenario("node_count = many")
        self.assertEqual(ctx.exception.key, "node_count")
        with self.assertRaises(ScenarioParseError):
            parse_scenario("variant = aodv")

    def test_missing_equals(self):
        with self.assertRaises(ScenarioParseError) as ctx:
            parse_scenario("\nnode_count 5")
        self.assertEqual(ctx.exception.line, 2)

    def test_dump_then_parse_gives_same_scenario(self):
        scenario = desk_scenario(variant=Variant.MDC_MPOLSR, seed=7, v_max=2.5)
        self.assertEqual(parse_scenario(dump_scenario(scenario)), scenario)

    def test_load_scenario_file(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            path = os.path.join(tmpdir, "run.scenario")
            with open(path, "w", encoding="utf-8") as f:
                f.write("node_count = 12\n")
            self.assertEqual(load_scenario(path).node_count, 12)


class TestValidate(unittest.TestCase):
    """Cross-field checks report every problem at once."""

    def test_collects_all_problems(self):
        with self.assertRaises(InvalidScenario) as ctx:
            Scenario(warmup_s=300.0, mdc_m=5, v_min=4.0, v_max=2.0).validate()
        names = [name for name, _ in ctx.exception.diagnostics]
        self.assertEqual(names, ["warmup_s", "mdc_m", "v_max"])

    def test_line_must_fit_area(self):
        with self.assertRaises(InvalidScenario) as ctx:
            Scenario(placement="line", node_count=10, line_spacing_m=200.0).validate()
        self.assertEqual(ctx.exception.diagnostics[0][0], "line_spacing_m")

    def test_flows_need_two_nodes(self):
        with self.assertRaises(InvalidScenario):
            Scenario(node_count=1).validate()
        Scenario(node_count=1, cbr_flow_count=0).validate()

    def test_flush_factor_and_retry_interval(self):
        scenario = Scenario()
        self.assertEqual(scenario.mdc_flush_factor, 2.0)
        self.assertEqual(scenario.mac_retry_interval_s, 0.004)
        self.assertEqual(parse_scenario("mdc_flush_factor = 3.5").mdc_flush_factor, 3.5)
        with self.assertRaises(InvalidScenario) as ctx:
            Scenario(mdc_flush_factor=0.0, mac_retry_interval_s=-1.0).validate()
        names = [name for name, _ in ctx.exception.diagnostics]
        self.assertEqual(names, ["mdc_flush_factor", "mac_retry_interval_s"])

    def test_parse_validates(self):
        with self.assertRaises(InvalidScenario):
            parse_scenario("placement = ring")


class TestVariants(unittest.TestCase):
    def test_feature_flags(self):
        self.assertFalse(Variant.OLSR.feedback)
        self.assertTrue(Variant.OLSR_FB.feedback)
        self.assertFalse(Variant.OLSR_FB.multipath)
        self.assertTrue(Variant.SR_MPOLSR.multipath)
        self.assertFalse(Variant.SR_MPOLSR.recovery)
        self.assertTrue(Variant.RE_MPOLSR.recovery)
        self.assertTrue(Variant.MDC_MPOLSR.mdc)
        self.assertTrue(Variant.MDC_MPOLSR.recovery)

    def test_routes_per_flow(self):
        self.assertEqual(Scenario(n_routes=3).routes_per_flow, 3)
        self.assertEqual(Scenario(variant=Variant.MDC_MPOLSR, mdc_n=4).routes_per_flow, 4)


class TestPresets(unittest.TestCase):
    def test_bundled_scenario_files(self):
        """Every file under scenarios/ parses and validates."""
        folder = os.path.join(os.path.dirname(__file__), "..", "scenarios")
        names = sorted(n for n in os.listdir(folder) if n.endswith(".scenario"))
        self.assertEqual(names, ["desk.scenario", "line.scenario", "mdc.scenario", "reference.scenario"])
        for name in names:
            load_scenario(os.path.join(folder, name))
        self.assertEqual(load_scenario(os.path.join(folder, "desk.scenario")), desk_scenario())

    def test_reference_scenario(self):
        scenario = reference_scenario()
        self.assertEqual(scenario.node_count, 50)
        self.assertEqual(scenario.cbr_flow_count, 30)
        self.assertEqual(scenario.duration_s, 200.0)

    def test_desk_scenario(self):
        scenario = desk_scenario(seed=3)
        self.assertEqual((scenario.node_count, scenario.cbr_flow_count), (20, 5))
        self.assertEqual(scenario.seed, 3)

    def test_dense_mdc_scenario(self):
        scenario = dense_mdc_scenario()
        self.assertEqual(scenario.node_count, 100)
        self.assertIs(scenario.variant, Variant.MDC_MPOLSR)
        self.assertEqual((scenario.mdc_n, scenario.mdc_m), (4, 2))


if __name__ == "__main__":
    unittest.main()
