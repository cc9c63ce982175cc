"""
Batch sweeps: one run per (variant, max speed, seed), executed in worker
processes, collected into a CSV in a fixed row order.

Author: Alberto Barrago
License: BSD 3-Clause License - 2025
"""

import asyncio
import csv
import io
import multiprocessing
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Union

import aiofiles

from mpolsr.config.const import Constant
from mpolsr.config.scenario import Scenario, Variant, parse_scenario
from mpolsr.log import get_logger
from mpolsr.service.metrics import MetricsReport
from mpolsr.sim.engine import run

logger = get_logger(__name__)


@dataclass(frozen=True)
class RunSpec:
    variant: Variant
    max_speed: float
    seed: int

    def apply(self, base: Scenario) -> Scenario:
        """The base scenario with this run's variant, speed cap and seed."""
        return base.replace(
            variant=self.variant,
            v_max=self.max_speed,
            v_min=min(base.v_min, self.max_speed),
            seed=self.seed,
        ).validate()


@dataclass(frozen=True)
class BatchResult:
    spec: RunSpec
    report: MetricsReport

    def csv_row(self) -> List[str]:
        return self.report.csv_row(self.spec.variant.value, self.spec.max_speed, self.spec.seed)


def expand_grid(
    variants: Iterable[Variant], speeds: Iterable[float], seeds: Iterable[int]
) -> List[RunSpec]:
    """Every (variant, speed, seed) once, ascending in that order."""
    grid = {
        RunSpec(Variant(variant), float(speed), int(seed))
        for variant in variants
        for speed in speeds
        for seed in seeds
    }
    return sorted(grid, key=lambda r: (r.variant.value, r.max_speed, r.seed))


def render_csv(results: Sequence[BatchResult]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(Constant.csv_columns)
    for result in results:
        writer.writerow(result.csv_row())
    return buffer.getvalue()


async def load_scenario_async(path: str) -> Scenario:
    """Read and parse a scenario file without blocking the event loop."""
    async with aiofiles.open(path, "r", encoding="utf-8") as f:
        return parse_scenario(await f.read())


async def run_batch(
    scenario: Union[Scenario, str],
    speeds: Iterable[float],
    seeds: Iterable[int],
    variants: Iterable[Variant],
    out: Optional[str] = None,
    workers: int = Constant.max_batch_workers,
) -> str:
    """
    Run the sweep grid and return the CSV text.

    With more than one worker the runs go to a pool of spawned processes;
    a single worker runs them one after another on a helper thread. Runs
    are pure functions of their scenario, so both give the same CSV.

    Args:
        scenario: A Scenario or the path of a scenario file.
        speeds: Maximum speeds (m/s) to sweep.
        seeds: Seeds per point.
        variants: Protocol variants to compare.
        out: When given, the CSV is also written there.
        workers: Runs executing at the same time.

    Raises:
        ScenarioParseError / InvalidScenario: the scenario is unusable.
    """
    base = await load_scenario_async(scenario) if isinstance(scenario, str) else scenario
    grid = expand_grid(variants, speeds, seeds)
    scenarios = [spec.apply(base) for spec in grid]
    loop = asyncio.get_running_loop()

    async def one(spec: RunSpec, run_scenario: Scenario, pool) -> BatchResult:
        if pool is None:
            report = await asyncio.to_thread(run, run_scenario)
        else:
            report = await loop.run_in_executor(pool, run, run_scenario)
        logger.info(
            "%s speed=%s seed=%s: %d/%d delivered",
            spec.variant.value,
            spec.max_speed,
            spec.seed,
            report.data_delivered,
            report.data_sent,
        )
        return BatchResult(spec, report)

    if workers > 1 and len(grid) > 1:
        context = multiprocessing.get_context("spawn")
        with ProcessPoolExecutor(max_workers=min(workers, len(grid)), mp_context=context) as pool:
            results = await asyncio.gather(*(one(s, sc, pool) for s, sc in zip(grid, scenarios)))
    else:
        results = []
        for s, sc in zip(grid, scenarios):
            results.append(await one(s, sc, None))

    text = render_csv(results)
    if out is not None:
        async with aiofiles.open(out, "w", encoding="utf-8") as f:
            await f.write(text)
    return text
