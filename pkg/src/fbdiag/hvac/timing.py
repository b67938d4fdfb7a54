"""Latency budgets measured from trace timestamps."""

from collections import deque
from dataclasses import dataclass, field

from ..runtime.trace import EVENT_FIRED

# (requirement id, stimulus, response instance role, response port, budget ms)
REQUIREMENTS = (
    ("temp_notify", "sample", "hvac", "ZONE_TEMP", 500),
    ("temp_display", "sample", "display", "DISP_TEMP", 250),
    ("setpoint_notify", "press", "hvac", "MODE_REQ", 500),
    ("setpoint_display", "press", "display", "SET_TEMP", 100),
)
DESCRIPTIONS = {
    "temp_notify": "HVAC_Controller.notify on new temperature",
    "temp_display": "ZoneTemperature display update",
    "setpoint_notify": "HVAC_Controller.notify on setpoint change",
    "setpoint_display": "SetTemperature display update",
}


@dataclass
class Compliance:
    requirement: str
    budget_ms: int
    met: int = 0
    total: int = 0
    max_latency_ms: int = 0

    def to_dict(self):
        return {"requirement": self.requirement, "description": DESCRIPTIONS[self.requirement],
                "budget_ms": self.budget_ms, "met": self.met, "total": self.total,
                "max_latency_ms": self.max_latency_ms}


@dataclass
class _Track:
    stats: Compliance
    fifo: bool
    pending: deque = field(default_factory=deque)

    def stimulus(self, t):
        self.pending.append(t)

    def response(self, t):
        budget = self.stats.budget_ms
        pending = self.pending
        if not pending:
            return
        if self.fifo:
            while pending and t - pending[0] >= budget:
                self._miss(pending.popleft())
            if pending:
                self._hit(t - pending.popleft())
        else:
            # a sensor chain answers the most recent sample; older ones were dropped
            latest = pending.pop()
            while pending:
                self._miss(pending.popleft())
            self._hit(t - latest)

    def _hit(self, latency):
        s = self.stats
        s.total += 1
        if latency < s.budget_ms:
            s.met += 1
        s.max_latency_ms = max(s.max_latency_ms, latency)

    def _miss(self, _t):
        self.stats.total += 1

    def close(self, now):
        while self.pending and now - self.pending[0] >= self.stats.budget_ms:
            self._miss(self.pending.popleft())


class TimingMonitor:
    """Streams trace records and press times into per-requirement compliance."""

    def __init__(self, rooms):
        self.stats = {rid: Compliance(rid, budget) for rid, _, _, _, budget in REQUIREMENTS}
        self._sample_src = {}
        self._responses = {}
        self._press_tracks = {}
        self._tracks = []
        for room in rooms:
            roles = {"hvac": room.hvac, "display": room.display}
            sample_tracks = []
            press_tracks = []
            for rid, stim, role, port, _ in REQUIREMENTS:
                inst = roles[role]
                if inst is None:
                    continue
                tr = _Track(self.stats[rid], fifo=(stim == "press"))
                self._tracks.append(tr)
                self._responses.setdefault((inst, port), []).append((room.zone, tr))
                (press_tracks if stim == "press" else sample_tracks).append(tr)
            self._sample_src[room.sensor] = sample_tracks
            self._press_tracks[room.zone] = press_tracks

    def press(self, zone, t):
        for tr in self._press_tracks.get(zone, ()):
            tr.stimulus(t)

    def feed(self, records):
        sample_src = self._sample_src
        responses = self._responses
        for r in records:
            if r.kind != EVENT_FIRED:
                continue
            if r.port == "SAMPLED" and r.instance in sample_src:
                for tr in sample_src[r.instance]:
                    tr.stimulus(r.time)
                continue
            hit = responses.get((r.instance, r.port))
            if hit:
                for _, tr in hit:
                    tr.response(r.time)

    def close(self, now):
        for tr in self._tracks:
            tr.close(now)

    def summary(self):
        return [self.stats[rid].to_dict() for rid, *_ in REQUIREMENTS]

    @property
    def all_met(self):
        return all(s.met == s.total for s in self.stats.values())
