"""AGENT_GATE interceptors spliced into diagnostic-point connections.

A gate sits on the links of one DP channel: the annotated connection plus
the event and data connections that travel with it (a data DP brings the
event that samples it, an event DP brings its WITH data). Gates act
synchronously inside the emitting FB's invocation, so a Monitor-mode gate
changes neither token order nor timing; they write no trace records.
"""

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import partial
from typing import List, NamedTuple

from ..errors import AlreadyRewired, GateNotIsolated, UnknownDp, UnknownGate
from ..model.descriptor import DATA
from ..model.values import coerce

MONITOR = "Monitor"
CLOSED = "Closed"
INJECT = "Inject"

K_EVENT = "event"
K_DATA = "data"
K_INJECTED = "injected"
K_SUPPRESSED = "suppressed"


class Packet(NamedTuple):
    gate: int
    dp: int
    seq: int
    t: int
    kind: str
    port: str
    value: object
    order: int  # bus-wide ordinal; this and ``event`` are not part of the wire record
    event: bool = False

    def to_dict(self):
        return {"gate": self.gate, "dp": self.dp, "seq": self.seq, "t": self.t,
                "kind": self.kind, "port": self.port, "value": self.value}


_tuple_new = tuple.__new__


@dataclass(frozen=True)
class ReceiptItem:
    index: int
    value: object
    start_ms: int
    end_ms: int


@dataclass(frozen=True)
class InjectionReceipt:
    gate: int
    dp: int
    start_ms: int
    end_ms: int
    items: tuple


class AgentGate:
    def __init__(self, gate_id, dp, app, data_links, event_links, shared, sampling_ms, ordinal):
        self.gate_id = gate_id
        self.dp = dp
        self.dp_id = dp.id
        self.app = app
        self.data_links = data_links
        self.event_links = event_links
        self.shared = shared
        self.sampling_interval_ms = sampling_ms
        self.mode = MONITOR
        self.seq = 0
        self.out_queue = deque()
        self.in_queue = deque()  # pending injection items (time, value)
        self._ordinal = ordinal
        self._epoch = 0
        dp_links = [l for l in data_links if l.conn.key == dp.location.key]
        self.dp_data_link = dp_links[0] if dp_links else None
        self.event_ports = {l.conn.src_port for l in event_links}

    def _packet(self, kind, port, value, event=False):
        self.seq += 1
        self.out_queue.append(_tuple_new(Packet, (self.gate_id, self.dp_id, self.seq,
                                                  self.app.clock, kind, port, value,
                                                  next(self._ordinal), event)))

    # interception hooks called by the runtime

    def on_data(self, link, value):
        if self.mode == MONITOR or link in self.shared:
            link.value = value
            self._packet(K_DATA, link.conn.src_port, value)
        else:
            self._packet(K_SUPPRESSED, link.conn.src_port, value)

    def on_event(self, link):
        port = link.conn.src_port
        if self.mode == MONITOR:
            self._packet(K_EVENT, port, port, True)
            self.app.deliver(link)
        else:
            self._packet(K_SUPPRESSED, port, port, True)

    def drain(self):
        out = list(self.out_queue)
        self.out_queue.clear()
        return out

    # commands

    def close(self):
        if self.mode == MONITOR:
            self.mode = CLOSED

    def open(self):
        self.mode = MONITOR
        self._epoch += 1
        self.in_queue.clear()

    def inject(self, values, spacing_ms, start_ms=None, repeat_ms=None):
        """Emit each value downstream for ``spacing_ms``, re-sent every ``repeat_ms``."""
        if self.mode == MONITOR:
            raise GateNotIsolated(f"gate {self.gate_id} (DP{self.dp.id}) is in Monitor mode")
        if spacing_ms <= 0:
            raise ValueError("spacing_ms must be positive")
        app = self.app
        start = app.clock + app.tick_ms if start_ms is None else start_ms
        repeat = repeat_ms or spacing_ms
        self.mode = INJECT
        epoch = self._epoch
        items = []
        for i, v in enumerate(values):
            t0 = start + i * spacing_ms
            for at in range(t0, t0 + spacing_ms, repeat):
                self.in_queue.append((at, v))
                app.schedule(at, partial(self._fire, epoch, v))
            items.append(ReceiptItem(i, v, t0, t0 + spacing_ms))
        end = start + len(items) * spacing_ms
        app.schedule(end, partial(self._finish, epoch))
        return InjectionReceipt(self.gate_id, self.dp.id, start, end, tuple(items))

    def _fire(self, epoch, value, app):
        if epoch != self._epoch or self.mode != INJECT:
            return
        self.in_queue.popleft()
        link = self.dp_data_link
        if link is not None:
            kind = link.dst.info.types[link.dst_port]
            link.value = coerce(value, kind)
            self._packet(K_INJECTED, link.conn.src_port, link.value)
        for ev in self.event_links:
            self._packet(K_INJECTED, ev.conn.src_port, ev.conn.src_port, True)
            app.deliver(ev)

    def _finish(self, epoch, app):
        if epoch == self._epoch and self.mode == INJECT:
            self.mode = CLOSED

    def __repr__(self):
        return f"<AgentGate {self.gate_id} DP{self.dp.id} {self.mode}>"


def _with(inst, event, out=True):
    table = inst.info.out_with if out else inst.info.in_with
    return {name for name, _ in table.get(event, ())}


def _channel(app, dp):
    """Links carried by the DP: (data links, event links, shared data links)."""
    conn = dp.location
    src = app.instances[conn.src]
    dst = app.instances[conn.dst]
    events = []
    if conn.kind == DATA:
        for ev, links in src.out_events.items():
            if conn.src_port not in _with(src, ev):
                continue
            events += [l for l in links
                       if l.dst is dst and conn.dst_port in _with(dst, l.dst_port, out=False)]
    else:
        events = [l for l in src.out_events[conn.src_port] if l.conn.key == conn.key]
    data = []
    if conn.kind == DATA:
        data += [l for l in src.out_data[conn.src_port] if l.conn.key == conn.key]
    for ev in events:
        for port in _with(src, ev.conn.src_port):
            for l in src.out_data[port]:
                if l.dst is dst and l.dst_port in _with(dst, ev.dst_port, out=False) \
                        and l not in data:
                    data.append(l)
    channel_events = {l.conn.src_port for l in events}
    shared = set()
    for l in data:
        p = l.conn.src_port
        if conn.kind == DATA and l.conn.key == conn.key:
            continue
        others = [e for e in src.out_events if e not in channel_events and p in _with(src, e)]
        if others:
            shared.add(l)
    return data, events, shared


@dataclass
class Instrumentation:
    """Handle on a rewired app: gates by id and by DP, plus the bus ordinal."""

    app: object
    gates: dict = field(default_factory=dict)
    by_dp: dict = field(default_factory=dict)
    sampling_interval_ms: int = 50
    ordinal: object = field(default_factory=itertools.count)

    def gate(self, handle):
        g = self.gates.get(handle)
        if g is None:
            raise UnknownGate(f"no gate {handle!r}")
        return g

    def gate_for_dp(self, dp_id):
        g = self.by_dp.get(dp_id)
        if g is None:
            raise UnknownDp(f"DP {dp_id} is not rewired")
        return g

    def drain(self):
        """All queued packets from every gate, in emission order."""
        out = []
        for g in self.gates.values():
            if g.out_queue:
                out += g.drain()
        out.sort(key=lambda p: p.order)
        return out


def sampling_interval(app):
    periods = [p for p, _ in app.timers]
    return max(1, min(periods) // 2) if periods else 50


def rewire(app, dps, instrumentation=None):
    """Splice a Monitor-mode gate into each DP; returns the Instrumentation handle."""
    desc = app.descriptor
    ids = list(dps)
    for d in ids:
        if desc.dp(d) is None:
            raise UnknownDp(f"unknown DP {d!r}")
    inst = instrumentation or Instrumentation(app, sampling_interval_ms=sampling_interval(app))
    planned = []
    for d in ids:
        if d in inst.by_dp or ids.count(d) > 1:
            raise AlreadyRewired(f"DP {d} is already rewired")
        dp = desc.dp(d)
        data, events, shared = _channel(app, dp)
        for l in data + events:
            if l.gate is not None:
                raise AlreadyRewired(f"DP {d}: connection {l.conn} already gated")
        planned.append((dp, data, events, shared))
    for dp, data, events, shared in planned:
        gid = max(inst.gates, default=0) + 1
        g = AgentGate(gid, dp, app, data, events, shared, inst.sampling_interval_ms,
                      inst.ordinal)
        for l in data + events:
            l.gate = g
        inst.gates[gid] = g
        inst.by_dp[dp.id] = g
    return inst


def unwire(inst, dps=None):
    """Remove gates, restoring the original links."""
    ids = list(inst.by_dp) if dps is None else list(dps)
    for d in ids:
        g = inst.gate_for_dp(d)
        for l in g.data_links + g.event_links:
            l.gate = None
        del inst.by_dp[d]
        del inst.gates[g.gate_id]
    return inst


def gate_close(inst, handles) -> List[int]:
    gates = [inst.gate(h) for h in handles]
    for g in gates:
        g.close()
    return [g.gate_id for g in gates]


def gate_open(inst, handles) -> List[int]:
    gates = [inst.gate(h) for h in handles]
    for g in gates:
        g.open()
    return [g.gate_id for g in gates]


def inject(gate, values, spacing_ms, start_ms=None, repeat_ms=None):
    return gate.inject(values, spacing_ms, start_ms, repeat_ms)
