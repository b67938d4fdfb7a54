import io
import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from fbdiag.errors import (
    AlreadyRewired, GateNotIsolated, InsufficientSamples, PlanMissing, UnknownDp, UnknownGate,
)
from fbdiag.fde import (
    CLOSED, HYPOTHESES, INJECT, MONITOR, Belief, Fde, FdeConfig, Packet, RateModel,
    build_pathways, compare, default_plans, exchange_beliefs, f_to_c, gate_close, gate_open,
    inject, ls_slope, rate_monitor, rewire, segment_row, unwire,
)
from fbdiag.fde.monitor import CONSISTENCY, ERROR, LATENCY, OUTLIER, PathwayMonitor
from fbdiag.fde.plans import align
from fbdiag.fde.wire import (
    apply_command, decode_command, decode_packet, encode_command, encode_packet, read_packets,
    write_packets,
)
from fbdiag.hvac import HvacSim
from fbdiag.runner import run_scenario
from fbdiag.runtime import fb_level
from fbdiag.runtime.trace import EVENT_FIRED


def fired(records, instance, port):
    return [r.time for r in records if r.kind == EVENT_FIRED and r.instance == instance
            and r.port == port]


class Rig:
    """A room simulation with every DP gated; collects trace and packets."""

    def __init__(self, desc, dps=(1, 2, 3, 4, 5)):
        self.sim = HvacSim(desc)
        self.inst = rewire(self.sim.app, dps)
        self.trace = []
        self.packets = []

    def run(self, until):
        self.sim.run(until, sink=self.trace.extend)
        self.packets += self.inst.drain()
        return self


# rewiring


def test_rewire_is_transparent(room_desc):
    bare = []
    HvacSim(room_desc).run(5000, sink=bare.extend)
    rig = Rig(room_desc).run(5000)
    assert len(rig.inst.gates) == 5
    assert all(g.mode == MONITOR for g in rig.inst.gates.values())
    assert fb_level(rig.trace) == fb_level(bare)
    assert rig.packets


def test_rewire_errors(room_desc):
    sim = HvacSim(room_desc)
    with pytest.raises(UnknownDp):
        rewire(sim.app, [99])
    inst = rewire(sim.app, [1])
    with pytest.raises(AlreadyRewired):
        rewire(sim.app, [1], inst)
    with pytest.raises(AlreadyRewired):
        rewire(sim.app, [2, 2], inst)


def test_two_room_ten_gates(two_room_desc):
    inst = rewire(HvacSim(two_room_desc).app, range(1, 11))
    assert sorted(inst.gates) == list(range(1, 11))
    assert sorted(inst.by_dp) == list(range(1, 11))


def test_unwire_restores(room_desc):
    rig = Rig(room_desc)
    unwire(rig.inst)
    rig.run(1000)
    assert rig.packets == [] and rig.inst.gates == {}


def test_gapless_monitor_telemetry(room_desc):
    rig = Rig(room_desc).run(10_000)
    by_gate = {}
    for p in rig.packets:
        by_gate.setdefault(p.gate, []).append(p.seq)
    for seqs in by_gate.values():
        assert seqs == list(range(1, len(seqs) + 1))
    assert [p.order for p in rig.packets] == sorted(p.order for p in rig.packets)


# gates


def test_close_blocks_fence(room_desc):
    rig = Rig(room_desc).run(1000)
    gate_close(rig.inst, [rig.inst.by_dp[1].gate_id, rig.inst.by_dp[5].gate_id])
    assert rig.inst.by_dp[1].mode == CLOSED
    mark = len(rig.trace)
    rig.run(3000)
    late = rig.trace[mark:]
    assert fired(late, "Z_TEMPERATURE", "SAMPLED")
    assert not [r for r in late if r.instance == "F_TO_C_CONV"]
    assert not fired(late, "HVAC_Z1", "ZONE_TEMP")
    fenced = [p for p in rig.packets if p.dp == 1 and p.t > 1000]
    assert fenced and {p.kind for p in fenced} == {"suppressed"}


def test_reopen_restores_flow(room_desc):
    rig = Rig(room_desc).run(1000)
    handles = [rig.inst.by_dp[1].gate_id, rig.inst.by_dp[5].gate_id]
    gate_close(rig.inst, handles)
    rig.run(2000)
    gate_open(rig.inst, handles)
    mark = len(rig.trace)
    rig.run(3000)
    late = rig.trace[mark:]
    assert len(fired(late, "HVAC_Z1", "ZONE_TEMP")) == len(fired(late, "Z_TEMPERATURE", "SAMPLED"))


def test_unknown_gate(room_desc):
    rig = Rig(room_desc)
    with pytest.raises(UnknownGate):
        gate_close(rig.inst, [42])
    with pytest.raises(UnknownDp):
        rig.inst.gate_for_dp(42)


def test_inject_requires_isolation(room_desc):
    rig = Rig(room_desc)
    with pytest.raises(GateNotIsolated):
        inject(rig.inst.by_dp[1], [32.0], 300)


def test_inject_conversion_values(room_desc):
    rig = Rig(room_desc).run(1000)
    g1 = rig.inst.by_dp[1]
    gate_close(rig.inst, [g1.gate_id, rig.inst.by_dp[5].gate_id])
    receipt = inject(g1, [32.0, 50.0, 212.0], 300, repeat_ms=100)
    assert g1.mode == INJECT
    rig.run(receipt.end_ms + 100)
    assert g1.mode == CLOSED
    observed = align(receipt, rig.packets, 2, "TEMP_C", 300)
    assert compare([0.0, 10.0, 100.0], observed, 1e-6).match
    injected = [p for p in rig.packets if p.kind == "injected" and p.port == "TEMP"]
    assert {p.value for p in injected} == {32.0, 50.0, 212.0}


def test_inject_absolute_zero(room_desc):
    rig = Rig(room_desc).run(1000)
    g1 = rig.inst.by_dp[1]
    gate_close(rig.inst, [g1.gate_id, rig.inst.by_dp[5].gate_id])
    receipt = inject(g1, [-459.67], 300)
    mark = len(rig.trace)
    rig.run(receipt.end_ms + 100)
    errors = [p for p in rig.packets if p.dp == 3 and p.t >= receipt.start_ms]
    assert errors and errors[0].port == "ERROR"
    assert not fired(rig.trace[mark:], "HVAC_Z1", "ZONE_TEMP")


# compare


def test_compare_examples():
    assert compare([0.0, 10.0, 100.0], [0.0, 10.0 + 5e-7, 100.0], 1e-6).match
    v = compare([20.0], [27.0], 0.1)
    assert not v.match and v.first_fail == 1 and v.residuals == [7.0]
    v = compare(["ERROR"], [None], 0.1)
    assert not v.match and v.reason == "timeout"
    assert not compare([None], ["ERROR"], 0.1).match
    with pytest.raises(ValueError):
        compare([1.0], [], 0.1)


def test_default_plans_shape(room_desc):
    pathway = build_pathways(room_desc)["temp"]
    p12, p25 = default_plans(pathway, room_desc)
    assert p12.segment == (1, 2) and p25.segment == (2, 5)
    assert set(p12.ring_fence) >= {1, 5}
    dp2 = p12.expectations[0]
    # out-of-range stimuli expect silence at DP2 and ERROR at DP3
    assert dp2.items[-1].expected is None
    assert p12.expectations[1].items[-1].expected == "ERROR"


# monitor detectors


def pk(dp, t, port, value, seq=1, event=False):
    return Packet(dp, dp, seq, t, "event" if event else "data", port, value, t, event)


@pytest.fixture
def monitor(room_desc):
    return PathwayMonitor(build_pathways(room_desc)["temp"], FdeConfig(), 50)


def test_monitor_consistent(monitor):
    out = []
    monitor.feed(pk(1, 100, "TEMP", 68.0), out)
    monitor.feed(pk(2, 100, "TEMP_C", 20.0), out)
    monitor.expire(1000, out)
    assert out == []


def test_monitor_inconsistent(monitor):
    out = []
    monitor.feed(pk(1, 100, "TEMP", 68.0), out)
    monitor.feed(pk(2, 100, "TEMP_C", 27.0), out)
    assert [a.kind for a in out] == [CONSISTENCY]
    assert out[0].detail["expected"] == pytest.approx(20.0)


def test_monitor_latency(monitor):
    out = []
    monitor.feed(pk(1, 100, "TEMP", 68.0), out)
    monitor.expire(250, out)
    assert out == []
    monitor.expire(400, out)
    assert [a.kind for a in out] == [LATENCY]


def test_monitor_error_and_outlier(monitor):
    out = []
    monitor.feed(pk(1, 100, "TEMP", 68.0), out)
    monitor.feed(pk(1, 200, "TEMP", 120.0, seq=2), out)
    monitor.feed(pk(3, 200, "ERROR", "ERROR", event=True), out)
    monitor.expire(1000, out)
    assert [a.kind for a in out] == [OUTLIER, ERROR]


# rate model


def oracle_p_degraded(rate, m):
    h = (1 - m.prior_degraded) * stats.norm.pdf(rate, m.expected_rate_c_per_min, m.sigma_healthy)
    d = m.prior_degraded * stats.norm.pdf(rate, 0.0, m.sigma_degraded)
    return d / (h + d)


@pytest.mark.parametrize("rate", [0.29, 0.3, 0.15, 0.05, 0.0, -0.1])
def test_p_degraded_matches_oracle(rate):
    m = RateModel()
    assert m.p_degraded(rate) == pytest.approx(oracle_p_degraded(rate, m), rel=1e-9)


def line(rate, n=301, t0=0, z0=19.0):
    return [(t0 + i * 1000, z0 + rate * i / 60) for i in range(n)]


def test_healthy_rate_no_intervention():
    d = rate_monitor(RateModel(), line(0.29), 0, 1)
    assert d.rate_c_per_min == pytest.approx(0.29)
    assert d.p_degraded < 0.05 and not d.intervene


def test_flat_rate_intervenes():
    d = rate_monitor(RateModel(), line(0.0), 0, 1)
    assert d.p_degraded > 0.95 and d.intervene


def test_cooling_orientation():
    d = rate_monitor(RateModel(), line(-0.3), 0, -1)
    assert d.rate_c_per_min == pytest.approx(0.3) and not d.intervene


def test_insufficient_samples():
    with pytest.raises(InsufficientSamples):
        rate_monitor(RateModel(), line(0.3, n=200), 0, 1)
    with pytest.raises(InsufficientSamples):
        ls_slope([(0, 1.0)])
    with pytest.raises(InsufficientSamples):
        ls_slope([(5, 1.0), (5, 2.0)])


def test_rate_model_validation():
    with pytest.raises(ValueError):
        RateModel(sigma_healthy=0)
    with pytest.raises(ValueError):
        RateModel(intervention_threshold=0.4)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 600_000), st.floats(-50, 50)), min_size=2,
                max_size=50, unique_by=lambda s: s[0]))
def test_ls_slope_matches_linregress(samples):
    ts = [t for t, _ in samples]
    ys = [y for _, y in samples]
    want = stats.linregress(ts, ys).slope * 60000.0
    assert ls_slope(samples) == pytest.approx(want, rel=1e-6, abs=1e-9)


# beliefs


_rows = st.lists(st.floats(1e-6, 1.0), min_size=len(HYPOTHESES), max_size=len(HYPOTHESES))


@settings(max_examples=200, deadline=None)
@given(st.lists(_rows, min_size=1, max_size=30))
def test_belief_stays_normalized(rows):
    b = Belief()
    for r in rows:
        b.update(r)
        assert math.fsum(b.p) == pytest.approx(1.0, abs=1e-9)
        assert all(x >= 0 for x in b.p)


def test_segment_rows():
    row = dict(zip(HYPOTHESES, segment_row("ConversionFault", False)))
    assert max(row, key=row.get) == "ConversionFault"
    assert row["NoFault"] < row["SensorFault"]
    b = Belief()
    b.update(segment_row("ConversionFault", False))
    assert b.map == "ConversionFault"
    with pytest.raises(ValueError):
        segment_row("Gremlin", True)


def test_belief_rejects_bad_rows():
    with pytest.raises(ValueError):
        Belief().update((1.0, 2.0))
    with pytest.raises(ValueError):
        Belief().update((0.0,) * len(HYPOTHESES))
    with pytest.raises(ValueError):
        Belief().update({"Gremlin": 1.0})


# back-channel


def test_single_agent_view(room_desc):
    sim = HvacSim(room_desc)
    fde = Fde(sim.app, FdeConfig(mode="monitor"))
    sim.run(1000)
    (agent,) = fde.agents
    view = exchange_beliefs(fde.agents, 1000)
    assert view["agents"] == [agent.snapshot(1000).to_dict()]
    assert view["shared_flags"] == [] and agent.inbox == []


def test_two_agents_disjoint(two_room_desc):
    sim = HvacSim(two_room_desc)
    fde = Fde(sim.app, FdeConfig(mode="monitor"))
    sim.run(2000)
    before = [a.belief.p for a in fde.agents]
    view = fde.exchange()
    assert [m["from"] for m in view["agents"]] == ["agent:ROOM1", "agent:ROOM2"]
    assert view["shared_flags"] == []
    assert [a.belief.p for a in fde.agents] == before
    assert all(len(a.inbox) == 1 for a in fde.agents)


def test_halted_main_controller_flagged(two_room_desc):
    sim = HvacSim(two_room_desc)
    fde = Fde(sim.app, FdeConfig(mode="monitor"))
    sim.run(1000)
    sim.app.halt_device("MAIN_DEV")
    sim.run(3000)
    view = fde.exchange()
    assert view["shared_flags"] == [{"component": "HVAC_MAIN",
                                     "agents": ["agent:ROOM1", "agent:ROOM2"]}]


# wire format


def test_packet_roundtrip():
    p = Packet(3, 2, 7, 1200, "data", "TEMP_C", 21.5, 99)
    line = encode_packet(p)
    assert json.loads(line) == {"gate": 3, "dp": 2, "seq": 7, "t": 1200, "kind": "data",
                                "port": "TEMP_C", "value": 21.5}
    back = decode_packet(line)
    assert back.to_dict() == p.to_dict()
    buf = io.StringIO()
    write_packets([p, p], buf)
    buf.seek(0)
    assert len(read_packets(buf)) == 2


@pytest.mark.parametrize("line", [
    '{"gate":1,"dp":1,"seq":1,"t":0,"kind":"data","port":"X"}',
    '{"gate":1,"dp":1,"seq":1,"t":0,"kind":"weird","port":"X","value":1}',
    '{"gate":1,"dp":1,"seq":1.5,"t":0,"kind":"data","port":"X","value":1}',
])
def test_bad_packets(line):
    with pytest.raises(ValueError):
        decode_packet(line)


def test_commands(room_desc):
    sim = HvacSim(room_desc)
    inst = rewire(sim.app, [1])
    assert decode_command(encode_command("gate_close", gates=[1])) == ("gate_close", {"gates": [1]})
    with pytest.raises(ValueError):
        encode_command("reboot")
    assert apply_command(inst, encode_command("rewire", dps=[2, 5]))["gates"] == [2, 3]
    apply_command(inst, encode_command("gate_close", gates=[1]))
    res = apply_command(inst, encode_command("inject", gate=1, values=[50.0], spacing_ms=300))
    assert res["items"] == 1 and res["end_ms"] - res["start_ms"] == 300
    apply_command(inst, encode_command("gate_open", gates=[1]))
    assert inst.by_dp[1].mode == MONITOR
    apply_command(inst, encode_command("unwire"))
    assert inst.gates == {}


# diagnosis


def test_plan_missing(room_desc):
    fde = Fde(HvacSim(room_desc).app, FdeConfig(mode="auto"))
    with pytest.raises(PlanMissing):
        fde.force_diagnosis("nowhere")


@pytest.mark.parametrize("name, hypothesis", [
    ("intermittent_sensor", "SensorFault"),
    ("conversion_bug", "ConversionFault"),
    ("blocked_duct", "ActuatorOrPlantFault"),
])
def test_scenario_diagnosis(scenario, name, hypothesis):
    res = run_scenario(scenario(name), stop_after_report=True)
    (report,) = res.report["diagnoses"]
    assert report["hypothesis"] == hypothesis
    assert math.fsum(report["posterior"].values()) == pytest.approx(1.0)
    actions = [e["action"] for e in report["timeline"]]
    assert actions[0] == "start" and "gate_close" in actions and actions[-1] == "gate_open"


def test_forced_healthy_is_no_fault(scenario):
    res = run_scenario(scenario("healthy"), force_pathway="temp", stop_after_report=True)
    (report,) = res.report["diagnoses"]
    assert report["origin"] == "forced"
    assert report["hypothesis"] == "NoFault"
    assert all(e["verdict"] == "Match" for e in report["evidence"] if "verdict" in e
               and e["component"] != "source")


def test_f_to_c():
    assert f_to_c(212.0) == pytest.approx(100.0)
    assert f_to_c(-40.0) == pytest.approx(-40.0)
