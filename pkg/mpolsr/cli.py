"""
Command-line entry point.

    mpolsr simulate --scenario FILE [--variant V] [--seed N] [--trace FILE] [--json]
    mpolsr sweep --scenario FILE --variants a,b --speeds 2,6 --seeds 1,2 --out FILE
    mpolsr routes --scenario FILE --node S --dest D [--seed N]

Author: Alberto Barrago
License: BSD 3-Clause License - 2025
"""

import argparse
import asyncio
import json
import sys
from typing import Callable, List, Optional

from mpolsr.config.const import Constant
from mpolsr.config.scenario import Scenario, Variant, load_scenario
from mpolsr.errors import MpOlsrError, UnknownSource
from mpolsr.log import configure_logging, get_logger
from mpolsr.routing.graph import disjointness
from mpolsr.routing.multipath import compute_routes
from mpolsr.service.batch import run_batch
from mpolsr.service.format import format_duration, seconds
from mpolsr.service.metrics import (
    MetricsReport,
    average_delay,
    cov_load,
    delivery_ratio,
    routing_load,
)
from mpolsr.sim.engine import Simulator
from mpolsr.version import __version__

logger = get_logger(__name__)


def _split(kind: Callable):
    def parse(text: str) -> List:
        try:
            return [kind(item) for item in text.split(",") if item.strip()]
        except ValueError as e:
            raise argparse.ArgumentTypeError(str(e)) from None

    return parse


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mpolsr", description="MP-OLSR routing and MANET simulation"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    commands = parser.add_subparsers(dest="command", required=True)

    simulate = commands.add_parser("simulate", help="run one scenario")
    simulate.add_argument("--scenario", required=True)
    simulate.add_argument("--variant", type=Variant)
    simulate.add_argument("--seed", type=int)
    simulate.add_argument("--trace", help="write the event trace to this file")
    simulate.add_argument("--json", action="store_true", help="print the report as JSON")

    sweep = commands.add_parser("sweep", help="run a variant x speed x seed grid")
    sweep.add_argument("--scenario", required=True)
    sweep.add_argument("--variants", type=_split(Variant), required=True)
    sweep.add_argument("--speeds", type=_split(float), required=True)
    sweep.add_argument("--seeds", type=_split(int), required=True)
    sweep.add_argument("--out", required=True)
    sweep.add_argument("--workers", type=int, default=Constant.max_batch_workers)

    routes = commands.add_parser("routes", help="multipath routes after warmup")
    routes.add_argument("--scenario", required=True)
    routes.add_argument("--node", type=int, required=True)
    routes.add_argument("--dest", type=int, required=True)
    routes.add_argument("--seed", type=int)
    return parser


def _metric(metric, report: MetricsReport, render=str) -> str:
    try:
        return render(metric(report))
    except MpOlsrError as e:
        return f"n/a ({e})"


def print_report(scenario: Scenario, report: MetricsReport) -> None:
    print(f"{scenario.variant.value}, seed {scenario.seed}, {scenario.node_count} nodes")
    print(f"  data sent:        {report.data_sent}")
    print(f"  data delivered:   {report.data_delivered}")
    print(f"  delivery ratio:   {_metric(delivery_ratio, report, lambda v: f'{v:.4f}')}")
    print(f"  routing load:     {_metric(routing_load, report, lambda v: f'{v:.4f}')}")
    print(f"  average delay:    {_metric(average_delay, report, format_duration)}")
    print(f"  CoV of load:      {_metric(cov_load, report, lambda v: f'{v:.4f}')}")
    for reason, count in sorted(report.drop_reasons.items()):
        print(f"  dropped ({reason}): {count}")


def cmd_simulate(args) -> int:
    scenario = load_scenario(args.scenario)
    if args.variant is not None:
        scenario = scenario.replace(variant=args.variant)
    if args.seed is not None:
        scenario = scenario.replace(seed=args.seed)
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as trace:
            report = Simulator(scenario, trace).run()
        logger.info("trace written to %s", args.trace)
    else:
        report = Simulator(scenario).run()
    if args.json:
        print(json.dumps(report.to_dict(), indent=2))
    else:
        print_report(scenario, report)
    return 0


def cmd_sweep(args) -> int:
    print(Constant.mpolsr_welcome)
    asyncio.run(
        run_batch(
            args.scenario,
            speeds=args.speeds,
            seeds=args.seeds,
            variants=args.variants,
            out=args.out,
            workers=args.workers,
        )
    )
    logger.info("sweep written to %s", args.out)
    return 0


def cmd_routes(args) -> int:
    scenario = load_scenario(args.scenario)
    if args.seed is not None:
        scenario = scenario.replace(seed=args.seed)
    sim = Simulator(scenario)
    sim.advance(seconds(scenario.warmup_s))
    if not 0 <= args.node < scenario.node_count:
        raise UnknownSource(Constant.error_unknown_source.format(source=args.node))
    state = sim.nodes[args.node].protocol
    paths = compute_routes(state, args.dest, scenario.routes_per_flow, sim.policy, sim.now)
    for index, path in enumerate(paths):
        print(f"P{index + 1}: {' -> '.join(map(str, path.hops))} (cost {path.cost})")
    shared = disjointness(paths)
    print(f"shared nodes: {sorted(shared.shared_nodes) or 'none'}")
    print(f"shared links: {sorted(tuple(sorted(link)) for link in shared.shared_links) or 'none'}")
    return 0


COMMANDS = {"simulate": cmd_simulate, "sweep": cmd_sweep, "routes": cmd_routes}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        return COMMANDS[args.command](args)
    except (MpOlsrError, OSError, ValueError) as e:
        logger.error("%s", e)
    return 1


if __name__ == "__main__":
    sys.exit(main())
