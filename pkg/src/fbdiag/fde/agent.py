"""FDE agents: monitoring, divide-and-conquer diagnosis and reports."""

import logging
from dataclasses import dataclass, field
from typing import List, Optional

from ..errors import PlanMissing
from .belief import Belief, segment_row
from .gate import K_SUPPRESSED, gate_close, gate_open
from .monitor import MISSING_ACK, OUTLIER, RATE, PathwayMonitor, gap_anomaly
from .plans import evaluate_plan

log = logging.getLogger(__name__)

ORIGIN_MONITOR = "monitor"
ORIGIN_RATE = "rate"
ORIGIN_FORCED = "forced"


@dataclass
class DiagnosisReport:
    agent: str
    pathway: str
    origin: str
    hypothesis: str
    posterior: dict
    evidence: List[dict]
    timeline: List[dict]
    trigger: Optional[dict] = None

    @property
    def t_start(self):
        return self.timeline[0]["t"]

    @property
    def t_end(self):
        return self.timeline[-1]["t"]

    def to_dict(self):
        return {"agent": self.agent, "pathway": self.pathway, "origin": self.origin,
                "hypothesis": self.hypothesis, "posterior": self.posterior,
                "trigger": self.trigger, "evidence": self.evidence,
                "timeline": self.timeline}


def monitor_step(agent, packets, now):
    """Run the detectors over ``packets`` and fold anomalies into the belief."""
    anomalies = []
    single = len(agent.monitors) == 1
    last_seq = agent.last_seq
    for pid, mon in agent.monitors.items():
        mine = packets if single else [p for p in packets if p.dp in mon.pathway.dps]
        feed = mon.feed
        for p in mine:
            if p.seq != last_seq.get(p.gate, 0) + 1:
                anomalies.append(gap_anomaly(pid, p, last_seq.get(p.gate, 0) + 1))
            last_seq[p.gate] = p.seq
            feed(p, anomalies)
        mon.expire(now, anomalies)
    for a in anomalies:
        row = agent.config.likelihoods.get(a.kind)
        if row is not None:
            agent.belief.update(row)
        if a.kind == MISSING_ACK:
            agent.implicated.add(agent.ack_owner.get(a.pathway))
    agent.anomalies += anomalies
    return anomalies


class Agent:
    def __init__(self, agent_id, subapp, pathways, instrumentation, config, plans,
                 ack_owner=None, repeat_ms=100):
        self.agent_id = agent_id
        self.subapp = subapp
        self.pathways = {p.pathway_id: p for p in pathways}
        self.inst = instrumentation
        self.config = config
        self.plans = plans
        self.ack_owner = ack_owner or {}
        self.repeat_ms = repeat_ms
        self.belief = Belief(config.prior)
        self.monitors = {p.pathway_id: PathwayMonitor(p, config,
                                                      instrumentation.sampling_interval_ms)
                         for p in pathways}
        self.last_seq = {}
        self.anomalies = []
        self.reports = []
        self.implicated = set()
        self.inbox = []
        self.diagnoses = 0
        self.grace_until = 0
        self._diag = None
        self._diag_path = None
        self._wake = None
        self.diag_log = []
        self._forced = []

    @property
    def mode(self):
        return "Diagnostic" if self._diag is not None else "Monitor"

    @property
    def dps(self):
        return {d for p in self.pathways.values() for d in p.dps}

    def force(self, pathway_id, at=0):
        if pathway_id not in self.pathways:
            raise PlanMissing(f"agent {self.agent_id} has no pathway {pathway_id!r}")
        if not self.plans.get(pathway_id):
            raise PlanMissing(f"no diagnostic plans for pathway {pathway_id!r}")
        self._forced.append((at, pathway_id))

    def step(self, packets, now, auto):
        """One polling cycle: route packets, then advance any running diagnosis."""
        if self._diag is not None:
            self.last_seq.update({p.gate: p.seq for p in packets})
            self.diag_log += packets
            if now >= self._wake:
                self._advance(now)
            return []
        anomalies = monitor_step(self, packets, now)
        if self._forced and self._forced[0][0] <= now:
            _, pid = self._forced.pop(0)
            self._start(pid, ORIGIN_FORCED, None, now)
            return anomalies
        if not auto or now < self.grace_until or self.diagnoses >= self.config.max_diagnoses:
            return anomalies
        for a in anomalies:
            if a.kind in self.config.triggers and a.pathway in self.plans:
                origin = ORIGIN_RATE if a.kind == RATE else ORIGIN_MONITOR
                self._start(a.pathway, origin, a, now)
                break
        return anomalies

    def _start(self, pathway_id, origin, trigger, now):
        log.info("%s: diagnosing %s at %d ms (%s)", self.agent_id, pathway_id, now, origin)
        self.diag_log = []
        self._diag_path = pathway_id
        self._diag = diagnose(self, self.pathways[pathway_id], origin, trigger, now)
        self._wake = next(self._diag)

    def _advance(self, now):
        try:
            self._wake = self._diag.send(now)
        except StopIteration as stop:
            report = stop.value
            self.reports.append(report)
            self.diagnoses += 1
            self._diag = None
            self.diag_log = []
            self.grace_until = now + self.config.grace_ms
            self.monitors[self._diag_path].reset()
            log.info("%s: %s -> %s", self.agent_id, report.pathway, report.hypothesis)

    def snapshot(self, now):
        return BackChannelMessage(self.agent_id, self.subapp, self.belief.as_dict(),
                                  self.belief.map, now, tuple(sorted(self.implicated)))


@dataclass(frozen=True)
class BackChannelMessage:
    sender: str
    subapp: str
    belief: dict
    map_hypothesis: str
    t: int
    implicated: tuple = field(default=())

    def to_dict(self):
        return {"from": self.sender, "subapp": self.subapp, "belief": self.belief,
                "map": self.map_hypothesis, "t": self.t, "implicated": list(self.implicated)}


def _sensor_stream_jumps(packets, dp, port, jump):
    """Count of implausible jumps in the fenced-off source's suppressed stream."""
    last = None
    jumps = 0
    for p in packets:
        if p.dp == dp and p.port == port and p.kind == K_SUPPRESSED and not p.event:
            if last is not None and abs(p.value - last) > jump:
                jumps += 1
            last = p.value
    return jumps


def diagnose(agent, pathway, origin, trigger, now):
    """Divide-and-conquer diagnosis as a generator.

    Yields the simulated time to be resumed at; the caller sends back the
    current time. Returns the DiagnosisReport.
    """
    plans = agent.plans.get(pathway.pathway_id)
    if not plans:
        raise PlanMissing(f"no diagnostic plans for pathway {pathway.pathway_id!r}")
    inst = agent.inst
    belief = agent.belief
    timeline = [{"t": now, "action": "start", "detail": origin}]
    fence = list(pathway.boundary)
    gate_close(inst, [inst.gate_for_dp(d).gate_id for d in fence])
    timeline.append({"t": now, "action": "gate_close", "detail": sorted(fence)})
    evidence = []
    all_match = True
    for plan in plans:
        extra = [d for d in plan.ring_fence if d not in fence]
        if extra:
            gate_close(inst, [inst.gate_for_dp(d).gate_id for d in extra])
            fence += extra
            timeline.append({"t": now, "action": "gate_close", "detail": sorted(extra)})
        gate = inst.gate_for_dp(plan.injection.dp)
        receipt = gate.inject(plan.injection.values, plan.injection.spacing_ms,
                              repeat_ms=agent.repeat_ms)
        timeline.append({"t": now, "action": "inject",
                         "detail": {"plan": plan.plan_id, "dp": plan.injection.dp,
                                    "start_ms": receipt.start_ms, "end_ms": receipt.end_ms}})
        now = yield receipt.end_ms
        verdict, details = evaluate_plan(plan, receipt, agent.diag_log)
        belief.update(segment_row(plan.component, verdict.match))
        all_match = all_match and verdict.match
        evidence.append({"plan": plan.plan_id, "segment": list(plan.segment),
                         "component": plan.component, **verdict.to_dict(),
                         "observations": details})
        timeline.append({"t": now, "action": "compare",
                         "detail": {"plan": plan.plan_id, "verdict": verdict.verdict}})
    mon = agent.monitors[pathway.pathway_id]
    if mon.in_dp is not None:
        jumps = _sensor_stream_jumps(agent.diag_log, mon.in_dp, mon.in_port,
                                     agent.config.outlier_jump_f)
        if jumps:
            belief.update(agent.config.likelihoods[OUTLIER])
        evidence.append({"plan": "source-stream", "segment": [mon.in_dp],
                         "component": "source", "verdict": "Implausible" if jumps else "Plausible",
                         "jumps": jumps})
    if all_match and origin != ORIGIN_FORCED:
        row = "exonerate_rate" if origin == ORIGIN_RATE else "exonerate_monitor"
        belief.update(agent.config.likelihoods[row])
        timeline.append({"t": now, "action": "exonerate", "detail": row})
    gate_open(inst, [inst.gate_for_dp(d).gate_id for d in fence])
    timeline.append({"t": now, "action": "gate_open", "detail": sorted(fence)})
    return DiagnosisReport(agent.agent_id, pathway.pathway_id, origin, belief.map,
                           belief.as_dict(), evidence, timeline,
                           trigger.to_dict() if trigger is not None else None)
