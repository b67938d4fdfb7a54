"""Deterministic discrete-event execution of an instantiated FB network.

Time advances in fixed quanta (``tick_ms``). Within a quantum, pre-quantum
hooks run, then due host callbacks, then every timer-driven service FB whose
period divides the quantum time, then the event queue drains to quiescence,
then post-quantum hooks run. Connections have zero latency, so any chain of
FBs triggered in a quantum completes inside it.
"""

import heapq
import logging
from dataclasses import dataclass, field
from typing import List, Optional

from ..errors import (
    DivisionByZero, EccLivelock, EmptyQueue, EvalError, MissingBuiltin, PastTimestamp,
    UnknownPort,
)
from ..model.compile import compile_expression, compile_statements
from ..model.descriptor import BASIC, DATA, EVENT, IN, OUT
from ..model.validate import type_env
from ..model.values import coerce
from .trace import DATA_WRITTEN, EVENT_FIRED, STATE_ENTERED, TraceRecord

log = logging.getLogger(__name__)

ECC_BOUND = 1000


class _Transition:
    __slots__ = ("trigger", "guard", "target")

    def __init__(self, trigger, guard, target):
        self.trigger = trigger
        self.guard = guard
        self.target = target


class TypeInfo:
    """Per-FB-type tables shared by every instance of the type."""

    def __init__(self, decl, builtins):
        self.decl = decl
        self.name = decl.name
        self.basic = decl.kind == BASIC
        self.types = type_env(decl)
        names = [p.name for p in decl.interface if p.kind == DATA]
        names += [v.name for v in decl.internal_vars]
        self.slot_of = {n: i for i, n in enumerate(names)}
        initial = {p.name: p.initial for p in decl.interface if p.kind == DATA}
        initial.update((v.name, v.initial) for v in decl.internal_vars)
        self.initial = [initial[n] for n in names]
        self.in_events = [p.name for p in decl.ports(IN, EVENT)]
        self.out_events = [p.name for p in decl.ports(OUT, EVENT)]
        self.in_data = [p.name for p in decl.ports(IN, DATA)]
        self.out_data = [p.name for p in decl.ports(OUT, DATA)]
        self.in_with = {p.name: [(w, self.slot_of[w]) for w in p.with_assoc]
                        for p in decl.ports(IN, EVENT)}
        self.out_with = {p.name: [(w, self.slot_of[w]) for w in p.with_assoc]
                         for p in decl.ports(OUT, EVENT)}
        self.algorithms = {}
        self.state_names = [s.name for s in decl.states]
        self.actions = []
        self.transitions = []
        if not self.basic:
            return
        for a in decl.algorithms:
            if a.body is not None:
                code = compile_statements(a.body, self.slot_of, self.types)
                self.algorithms[a.name] = _code_runner(code)
            else:
                fn = builtins.get(a.builtin)
                if fn is None:
                    raise MissingBuiltin(f"{decl.name}.{a.name}: no builtin {a.builtin!r}")
                self.algorithms[a.name] = fn
        index = {s: i for i, s in enumerate(self.state_names)}
        for s in decl.states:
            self.actions.append([(self.algorithms.get(a.algorithm) if a.algorithm else None,
                                  a.output) for a in s.actions])
        self.transitions = [[] for _ in decl.states]
        for tr in decl.transitions:
            guard = None
            if tr.guard is not None:
                guard = compile_expression(tr.guard, self.slot_of, self.types)
            self.transitions[index[tr.source]].append(
                _Transition(tr.trigger, guard, index[tr.target]))


def _code_runner(code):
    def run(inst):
        code.run(inst.slots)
    run.code = code
    return run


class DataLink:
    """One data connection: the latched value travelling on the wire."""

    __slots__ = ("conn", "value", "dst", "dst_port", "dst_slot", "gate")

    def __init__(self, conn, value, dst, dst_port, dst_slot):
        self.conn = conn
        self.value = value
        self.dst = dst
        self.dst_port = dst_port
        self.dst_slot = dst_slot
        self.gate = None


class EventLink:
    __slots__ = ("conn", "dst", "dst_port", "gate")

    def __init__(self, conn, dst, dst_port):
        self.conn = conn
        self.dst = dst
        self.dst_port = dst_port
        self.gate = None


class Instance:
    """A function-block instance: variable store, ECC state and wiring."""

    def __init__(self, app, name, info, subapp, device):
        self.app = app
        self.name = name
        self.info = info
        self.subapp = subapp
        self.device = device
        self.slots = list(info.initial)
        self.state = 0
        self.halted = False
        self.error = None
        self.behavior = None
        self.out_events = {e: [] for e in info.out_events}
        self.out_data = {d: [] for d in info.out_data}
        self.in_link = {}

    @property
    def state_name(self):
        return self.info.state_names[self.state] if self.info.state_names else None

    def get(self, name):
        return self.slots[self.info.slot_of[name]]

    def set(self, name, value):
        kind = self.info.types[name]
        self.slots[self.info.slot_of[name]] = coerce(value, kind)

    def fire(self, event):
        """Emit an output event (used by service-FB behaviors)."""
        self.app._emit(self, event)

    @property
    def now(self):
        return self.app.clock

    def __repr__(self):
        return f"<Instance {self.name}:{self.info.name}>"


@dataclass
class StepReport:
    token: tuple
    transitions: List[tuple] = field(default_factory=list)
    outputs: List[tuple] = field(default_factory=list)
    error: Optional[str] = None


class RuntimeApp:
    def __init__(self, descriptor, tick_ms=10):
        self.descriptor = descriptor
        self.tick_ms = tick_ms
        self.instances = {}
        self.timers = []
        self.queue = []
        self.seq = 0
        self.trace_seq = 0
        self.clock = 0
        self.next_quantum = 0
        self.trace = []
        self.tracing = True
        self.errors = []
        self.pre_quantum = []
        self.post_quantum = []
        self._callbacks = []
        self._cb_seq = 0
        self._report = None
        self.events_processed = 0

    # construction

    def instance(self, name):
        try:
            return self.instances[name]
        except KeyError:
            raise UnknownPort(f"no instance {name!r}") from None

    def _record(self, kind, inst, port, value=None):
        if self.tracing:
            self.trace.append(TraceRecord(self.clock, self.trace_seq, kind, inst, port, value))
            self.trace_seq += 1

    def set_var(self, inst, name, value):
        self.instance(inst).set(name, value)

    def get_var(self, inst, name):
        return self.instance(inst).get(name)

    def publish(self, inst, port):
        """Push an output data value onto its connections without an event."""
        i = self.instance(inst)
        v = i.get(port)
        for link in i.out_data[port]:
            link.value = v

    def halt(self, inst, reason="halted by harness"):
        i = self.instance(inst)
        i.halted = True
        i.error = reason

    def halt_device(self, device):
        for i in self.instances.values():
            if i.device == device:
                i.halted = True
                i.error = f"device {device} halted"

    def schedule(self, at, fn):
        """Run ``fn(app)`` at the start of the first quantum at or after ``at``."""
        if at < self.clock:
            raise PastTimestamp(f"callback at {at} < clock {self.clock}")
        self._cb_seq += 1
        heapq.heappush(self._callbacks, (at, self._cb_seq, fn))

    # events

    def post_event(self, inst, port, at=None):
        if at is None:
            at = self.clock
        i = self.instance(inst)
        if port not in i.info.in_with:
            raise UnknownPort(f"{inst} has no event input {port!r}")
        if at < self.clock:
            raise PastTimestamp(f"event at {at} < clock {self.clock}")
        return self._enqueue(i, port, at)

    def _enqueue(self, inst, port, at):
        self.seq += 1
        heapq.heappush(self.queue, (at, self.seq, inst, port))
        return self.seq

    def _emit(self, inst, event):
        for port, slot in inst.info.out_with[event]:
            v = inst.slots[slot]
            if self.tracing:
                self.trace.append(TraceRecord(self.clock, self.trace_seq, DATA_WRITTEN,
                                              inst.name, port, v))
                self.trace_seq += 1
            for link in inst.out_data[port]:
                if link.gate is None:
                    link.value = v
                else:
                    link.gate.on_data(link, v)
        if self.tracing:
            self.trace.append(TraceRecord(self.clock, self.trace_seq, EVENT_FIRED,
                                          inst.name, event))
            self.trace_seq += 1
        if self._report is not None:
            self._report.outputs.append((inst.name, event))
        now = self.clock
        for link in inst.out_events[event]:
            if link.gate is None:
                self.seq += 1
                heapq.heappush(self.queue, (now, self.seq, link.dst, link.dst_port))
            else:
                link.gate.on_event(link)

    def deliver(self, link):
        """Enqueue the token carried by an event link at the current clock."""
        self.seq += 1
        heapq.heappush(self.queue, (self.clock, self.seq, link.dst, link.dst_port))

    def step(self):
        """Consume the head token and run the receiving FB to quiescence."""
        if not self.queue:
            raise EmptyQueue("step on an empty event queue")
        token = heapq.heappop(self.queue)
        if token[0] > self.clock:
            self.clock = token[0]
        report = StepReport((token[0], token[1], token[2].name, token[3]))
        self._report = report
        try:
            self._consume(token[2], token[3])
        finally:
            self._report = None
        if token[2].error and token[2].halted and report.error is None:
            report.error = token[2].error
        return report

    def _consume(self, inst, port):
        if inst.halted:
            return
        self.events_processed += 1
        tracing = self.tracing
        if tracing:
            self.trace.append(TraceRecord(self.clock, self.trace_seq, EVENT_FIRED, inst.name, port))
            self.trace_seq += 1
        slots = inst.slots
        for name, slot in inst.info.in_with[port]:
            link = inst.in_link.get(name)
            if link is not None:
                slots[slot] = link.value
                if tracing:
                    self.trace.append(TraceRecord(self.clock, self.trace_seq, DATA_WRITTEN,
                                                  inst.name, name, link.value))
                    self.trace_seq += 1
        if inst.info.basic:
            self._invoke(inst, port)
        elif inst.behavior is not None:
            inst.behavior.on_event(inst, port)

    def _invoke(self, inst, pending):
        info = inst.info
        count = 0
        report = self._report
        try:
            while True:
                for tr in info.transitions[inst.state]:
                    if tr.trigger is not None and tr.trigger != pending:
                        continue
                    if tr.guard is None or tr.guard.run(inst.slots) is True:
                        break
                else:
                    return
                count += 1
                if count > ECC_BOUND:
                    inst.halted = True
                    inst.error = "EccLivelock"
                    raise EccLivelock(inst.name, ECC_BOUND)
                if tr.trigger is not None:
                    pending = None
                if report is not None:
                    report.transitions.append((inst.name, info.state_names[inst.state],
                                               info.state_names[tr.target]))
                inst.state = tr.target
                if self.tracing:
                    self.trace.append(TraceRecord(self.clock, self.trace_seq, STATE_ENTERED,
                                                  inst.name, info.state_names[tr.target]))
                    self.trace_seq += 1
                for alg, out in info.actions[tr.target]:
                    if alg is not None:
                        alg(inst)
                    if out is not None:
                        self._emit(inst, out)
        except (DivisionByZero, EvalError, ArithmeticError, TypeError) as e:
            inst.halted = True
            inst.error = f"AlgorithmError: {type(e).__name__}: {e}"
            self.errors.append((self.clock, inst.name, inst.error))
            log.warning("%s halted at %d ms: %s", inst.name, self.clock, inst.error)

    # time

    def drain(self):
        queue = self.queue
        clock = self.clock
        consume = self._consume
        pop = heapq.heappop
        while queue and queue[0][0] <= clock:
            _, _, inst, port = pop(queue)
            consume(inst, port)

    def _quantum(self, t):
        self.clock = t
        for hook in self.pre_quantum:
            hook(self, t)
        cbs = self._callbacks
        while cbs and cbs[0][0] <= t:
            heapq.heappop(cbs)[2](self)
        for period, inst in self.timers:
            if t % period == 0 and not inst.halted:
                inst.behavior.on_timer(inst)
        if self.queue:
            self.drain()
        for hook in self.post_quantum:
            hook(self, t)

    def run_until(self, t):
        """Process every quantum strictly before ``t``; returns the new trace records."""
        if t < self.clock:
            raise PastTimestamp(f"run_until({t}) < clock {self.clock}")
        start = len(self.trace)
        tick = self.tick_ms
        if self.next_quantum < self.clock:
            # realign after manual steps moved the clock
            self.next_quantum = -(-self.clock // tick) * tick
        while self.next_quantum < t:
            self._quantum(self.next_quantum)
            self.next_quantum += tick
        self.clock = max(self.clock, t)
        return self.trace[start:]

    def take_trace(self):
        """Return and clear the accumulated trace."""
        out = self.trace
        self.trace = []
        return out

    @property
    def quiescent(self):
        return not self.queue


def instantiate(descriptor, builtins=None, tick_ms=10):
    """Build a RuntimeApp from a validated descriptor.

    ``builtins`` maps binding names to either service-FB behavior factories
    (``factory(instance) -> behavior``) or builtin algorithm callables.
    """
    builtins = builtins or {}
    app = RuntimeApp(descriptor, tick_ms)
    infos = {t.name: TypeInfo(t, builtins) for t in descriptor.fb_types}
    for decl, sa in descriptor.instances():
        info = infos[decl.type_ref]
        inst = Instance(app, decl.name, info, sa.name, sa.device)
        if not info.basic:
            factory = builtins.get(info.decl.builtin_binding)
            if factory is None:
                raise MissingBuiltin(f"{decl.name}: no builtin {info.decl.builtin_binding!r}")
            inst.behavior = factory(inst)
            period = getattr(inst.behavior, "period_ms", None)
            if period:
                app.timers.append((period, inst))
        app.instances[decl.name] = inst
    for c in descriptor.event_connections:
        src = app.instances[c.src]
        src.out_events[c.src_port].append(EventLink(c, app.instances[c.dst], c.dst_port))
    for c in descriptor.data_connections:
        src = app.instances[c.src]
        dst = app.instances[c.dst]
        link = DataLink(c, src.get(c.src_port), dst, c.dst_port, dst.info.slot_of[c.dst_port])
        src.out_data[c.src_port].append(link)
        dst.in_link[c.dst_port] = link
    return app
