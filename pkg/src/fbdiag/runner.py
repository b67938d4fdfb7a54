"""Run a scenario end to end and assemble its report documents."""

import json
import time
from collections import Counter
from contextlib import ExitStack
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

from .fde import Fde
from .fde.config import OFF
from .fde.wire import write_packets
from .hvac import HvacSim
from .runtime import write_trace_csv


@dataclass
class RunResult:
    report: dict
    perf: dict
    sim: HvacSim
    fde: Optional[Fde]
    trace: Optional[list] = None


def _dump(obj, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=False, allow_nan=False)
        fh.write("\n")


def run_scenario(scenario, out_dir=None, fde_mode=None, seed=None, force_pathway=None,
                 stop_after_report=False, keep_trace=False):
    """Simulate ``scenario``; optionally write trace.csv, telemetry.ndjson, report.json, perf.json.

    ``force_pathway`` starts a diagnosis of that pathway at t=0 regardless of
    anomalies; with ``stop_after_report`` the run ends once it is reported.
    """
    if seed is not None:
        scenario = replace(scenario, seed=seed)
    cfg = scenario.fde
    if fde_mode is not None:
        cfg = replace(cfg, mode=fde_mode)
    if force_pathway is not None and cfg.mode == OFF:
        cfg = replace(cfg, mode="monitor")
    desc = scenario.load_descriptor()
    sim = HvacSim(desc, seed=scenario.seed, tick_ms=scenario.tick_ms, plant_params=scenario.plant,
                  zones=scenario.zones, faults=scenario.faults, occupant=scenario.occupant)
    trace = [] if keep_trace else None
    with ExitStack() as stack:
        trace_fh = tel_fh = None
        if out_dir is not None:
            out = Path(out_dir)
            out.mkdir(parents=True, exist_ok=True)
            trace_fh = stack.enter_context(open(out / "trace.csv", "w", encoding="utf-8",
                                                newline=""))
            write_trace_csv([], trace_fh, header=True)
            if cfg.mode != OFF:
                tel_fh = stack.enter_context(open(out / "telemetry.ndjson", "w",
                                                  encoding="utf-8", newline="\n"))
        gate_counts = Counter()

        def on_packets(packets):
            for p in packets:
                gate_counts[p.gate] += 1
            if tel_fh is not None:
                write_packets(packets, tel_fh)

        fde = Fde(sim.app, cfg, sink=on_packets) if cfg.mode != OFF else None
        if force_pathway is not None:
            fde.force_diagnosis(force_pathway, 0)

        def on_trace(records):
            if trace_fh is not None:
                write_trace_csv(records, trace_fh, header=False)
            if trace is not None:
                trace.extend(records)

        t0 = time.perf_counter()
        step = 1000
        while sim.app.clock < scenario.duration_ms:
            sim.run(min(scenario.duration_ms, sim.app.clock + step), sink=on_trace)
            if stop_after_report and fde is not None and fde.reports:
                break
        if fde is not None:
            fde.flush()
        wall = time.perf_counter() - t0

    stats = sim.stats()
    report = {
        "scenario": scenario.name,
        "seed": scenario.seed,
        "duration_ms": sim.app.clock,
        "tick_ms": scenario.tick_ms,
        "fde_mode": cfg.mode,
        "timing": sim.timing_summary(),
        "timing_all_met": sim.timing.all_met,
        "samples": {"expected_per_sensor": sim.expected_samples(), "per_sensor": stats.samples,
                    "missed": stats.missed_samples},
        "events_processed": stats.events_processed,
        "runtime_errors": [{"t": t, "instance": i, "error": e} for t, i, e in sim.app.errors],
    }
    if fde is not None:
        report["gates"] = [{"gate": g.gate_id, "dp": g.dp.id, "packets": gate_counts[g.gate_id]}
                           for g in fde.instrumentation.gates.values()]
        anomalies = fde.anomalies
        report["anomaly_counts"] = dict(sorted(Counter(a.kind for a in anomalies).items()))
        report["anomalies"] = [a.to_dict() for a in anomalies]
        report["diagnoses"] = [r.to_dict() for r in fde.reports]
        report["merged_view"] = fde.exchange()
    perf = {
        "wall_clock_s": wall,
        "quanta": stats.quanta,
        "per_tick_us": 1e6 * wall / stats.quanta if stats.quanta else 0.0,
        "events_processed": stats.events_processed,
        "events_per_s": stats.events_processed / wall if wall else 0.0,
    }
    if out_dir is not None:
        _dump(report, Path(out_dir) / "report.json")
        _dump(perf, Path(out_dir) / "perf.json")
    return RunResult(report, perf, sim, fde, trace)
