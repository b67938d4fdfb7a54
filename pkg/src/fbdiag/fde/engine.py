"""Wires gates and agents into a running application and steps them."""

import logging

from ..errors import PlanMissing
from .agent import Agent
from .backchannel import exchange_beliefs
from .config import AUTO, FdeConfig
from .gate import rewire
from .pathway import ACK_BRANCH, build_pathways
from .plans import DiagnosticPlan, check_plan, default_plans

log = logging.getLogger(__name__)


def _order(p):
    return p.order


class Fde:
    """In-process FDE: one agent per sub-application owning a fault pathway.

    Agents poll the gates every sampling interval from a post-quantum hook,
    so they observe each quantum's traffic after the network is quiescent.
    """

    def __init__(self, app, config=None, sink=None):
        self.app = app
        self.config = config if isinstance(config, FdeConfig) else FdeConfig.from_dict(config)
        desc = app.descriptor
        self.pathways = build_pathways(desc, self.config.expected_latency_ms)
        dps = self.config.dps
        if dps is None:
            dps = sorted(d.id for d in desc.diagnostic_points)
        self.instrumentation = rewire(app, dps)
        self.sink = sink
        self.packets_seen = 0
        self.plans = self._plans(desc)
        periods = [p for p, _ in app.timers]
        repeat = self.config.repeat_ms or (min(periods) if periods else 100)
        by_subapp = {}
        for p in self.pathways.values():
            if set(p.dps) <= set(self.instrumentation.by_dp):
                by_subapp.setdefault(p.subapp, []).append(p)
        self.agents = []
        for subapp, paths in sorted(by_subapp.items()):
            ack_owner = {}
            for p in paths:
                ack = p.branch(ACK_BRANCH)
                if ack is not None:
                    ack_owner[p.pathway_id] = desc.instance_subapp(desc.dp(ack).location.src)
            self.agents.append(Agent(f"agent:{subapp}", subapp, paths, self.instrumentation,
                                     self.config, self.plans, ack_owner, repeat))
        owned = {d for a in self.agents for d in a.dps}
        stray = set(self.instrumentation.by_dp) - owned
        self._agent_gates = [(a, [self.instrumentation.by_dp[d] for d in sorted(a.dps)])
                             for a in self.agents]
        if stray:
            # gates on a partially rewired pathway only stream telemetry
            self._agent_gates.append((None, [self.instrumentation.by_dp[d]
                                             for d in sorted(stray)]))
        app.post_quantum.append(self._poll)

    def _plans(self, desc):
        if self.config.plans is None:
            return {pid: default_plans(p, desc, self.config.spacing_ms)
                    for pid, p in self.pathways.items()}
        plans = {}
        for d in self.config.plans:
            plan = check_plan(d if isinstance(d, DiagnosticPlan)
                              else DiagnosticPlan.from_dict(d), desc)
            plans.setdefault(plan.pathway, []).append(plan)
        return plans

    @property
    def sampling_interval_ms(self):
        return self.instrumentation.sampling_interval_ms

    def agent_for(self, pathway_id):
        for a in self.agents:
            if pathway_id in a.pathways:
                return a
        raise PlanMissing(f"no agent monitors pathway {pathway_id!r}")

    def force_diagnosis(self, pathway_id, at=0):
        if pathway_id not in self.plans:
            raise PlanMissing(f"no diagnostic plans for pathway {pathway_id!r}")
        self.agent_for(pathway_id).force(pathway_id, at)

    def _poll(self, app, t):
        if t % self.instrumentation.sampling_interval_ms:
            return
        auto = self.config.mode == AUTO
        batches = []
        for a, gates in self._agent_gates:
            packets = []
            for g in gates:
                if g.out_queue:
                    packets += g.drain()
            if len(gates) > 1:
                packets.sort(key=_order)
            batches.append(packets)
            if a is not None:
                a.step(packets, t, auto)
        n = sum(map(len, batches))
        self.packets_seen += n
        if n and self.sink is not None:
            merged = [p for b in batches for p in b]
            merged.sort(key=_order)
            self.sink(merged)

    def flush(self):
        """Hand any packets still queued in gates to the sink."""
        packets = self.instrumentation.drain()
        self.packets_seen += len(packets)
        if packets and self.sink is not None:
            self.sink(packets)
        return packets

    @property
    def reports(self):
        return [r for a in self.agents for r in a.reports]

    @property
    def anomalies(self):
        return sorted((x for a in self.agents for x in a.anomalies), key=lambda x: x.t)

    def exchange(self):
        return exchange_beliefs(self.agents, self.app.clock)
