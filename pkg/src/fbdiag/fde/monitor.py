"""Monitor-mode detectors run over one pathway's telemetry."""

from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from ..errors import InsufficientSamples
from .gate import K_DATA, K_EVENT
from .pathway import ACK_BRANCH
from .rate import rate_monitor

OUTLIER = "outlier"
LATENCY = "latency"
CONSISTENCY = "consistency"
ERROR = "error"
RATE = "rate"
MISSING_ACK = "missing_ack"
GAP = "telemetry_gap"


@dataclass
class Anomaly:
    kind: str
    pathway: str
    dp: int
    t: int
    detail: dict = field(default_factory=dict)

    def to_dict(self):
        return {"kind": self.kind, "pathway": self.pathway, "dp": self.dp, "t": self.t,
                "detail": self.detail}


class PathwayMonitor:
    """Detector state for one fault pathway."""

    def __init__(self, pathway, config, sampling_ms):
        self.pathway = pathway
        self.config = config
        self.sampling_ms = sampling_ms
        seg = pathway.segments[0] if pathway.segments else None
        self.seg = seg
        self.in_dp = seg.src_dp if seg else None
        self.out_dp = seg.dst_dp if seg else None
        self.err_dp = seg.error_dp if seg else None
        self.in_port = pathway.port(self.in_dp) if seg else None
        self.out_port = pathway.port(self.out_dp) if seg else None
        self.last_dp = pathway.mainline[-1] if pathway.mainline else None
        self.ack_dp = pathway.branch(ACK_BRANCH)
        self.setpoint: Optional[float] = None
        self.rate_decisions = []
        self.reset()

    def reset(self):
        self.last_in = None
        self.pending_in = deque()
        self.pending_ack = deque()
        self.zone = None
        self.change = None
        self.samples = []

    def _anomaly(self, kind, dp, t, **detail):
        return Anomaly(kind, self.pathway.pathway_id, dp, t, detail)

    def feed(self, p, out):
        """Process one packet; appends anomalies to ``out``."""
        if p.kind not in (K_DATA, K_EVENT):
            return
        dp = p.dp
        cfg = self.config
        if dp == self.in_dp and not p.event and p.port == self.in_port:
            v = p.value
            if self.last_in is not None and abs(v - self.last_in) > cfg.outlier_jump_f:
                out.append(self._anomaly(OUTLIER, dp, p.t, value=v, last=self.last_in))
            self.last_in = v
            self.pending_in.append((p.t, v))
        elif dp == self.out_dp and not p.event and p.port == self.out_port:
            if self.pending_in and p.t - self.pending_in[-1][0] <= self.sampling_ms:
                t_in, v_in = self.pending_in.pop()
                want = self.seg.apply(v_in)
                if abs(p.value - want) > cfg.consistency_tol_c:
                    out.append(self._anomaly(CONSISTENCY, dp, p.t, input=v_in,
                                             expected=want, observed=p.value))
        elif dp == self.err_dp and p.event:
            out.append(self._anomaly(ERROR, dp, p.t, port=p.port))
            self.pending_in.clear()
        if dp == self.last_dp:
            if p.event:
                if self.ack_dp is not None:
                    self.pending_ack.append(p.t)
            elif p.port == cfg.zone_port:
                self._zone_sample(p.t, p.value, out)
            elif p.port == cfg.setpoint_port:
                self._setpoint(p.t, p.value)
        elif dp == self.ack_dp and p.event and self.pending_ack:
            self.pending_ack.popleft()

    def _setpoint(self, t, s):
        if self.setpoint is None:
            self.setpoint = s
            return
        if s == self.setpoint:
            return
        self.setpoint = s
        model = self.config.rate
        if self.zone is not None and abs(s - self.zone) > model.deadband_c:
            self.change = (t, 1 if s > self.zone else -1)
            self.samples = [(t, self.zone)]
        else:
            self.change = None
            self.samples = []

    def _zone_sample(self, t, z, out):
        self.zone = z
        if self.change is None:
            return
        self.samples.append((t, z))
        t0, direction = self.change
        model = self.config.rate
        if t - t0 < model.window_ms:
            return
        try:
            d = rate_monitor(model, self.samples, t0, direction)
        except InsufficientSamples:
            return
        self.change = None
        self.samples = []
        self.rate_decisions.append((t, d))
        if d.intervene:
            out.append(self._anomaly(RATE, self.last_dp, t, rate=d.rate_c_per_min,
                                     p_degraded=d.p_degraded, change_t=t0))

    def expire(self, now, out):
        """Time-based detectors: inputs that never emerged, missing acknowledgements."""
        cfg = self.config
        lat = self.pathway.expected_latency_ms
        while self.pending_in and now - self.pending_in[0][0] > lat:
            t, v = self.pending_in.popleft()
            out.append(self._anomaly(LATENCY, self.in_dp, now, value=v, entered=t))
        while self.pending_ack and now - self.pending_ack[0] > cfg.ack_timeout_ms:
            t = self.pending_ack.popleft()
            out.append(self._anomaly(MISSING_ACK, self.ack_dp, now, sent=t))


def gap_anomaly(pathway_id, p, expected):
    return Anomaly(GAP, pathway_id, p.dp, p.t,
                   {"gate": p.gate, "expected_seq": expected, "seq": p.seq})


def check_gaps(last_seq, packets, pathway_id):
    """Per-gate sequence continuity; ``last_seq`` is updated in place."""
    out = []
    for p in packets:
        prev = last_seq.get(p.gate, 0)
        if p.seq != prev + 1:
            out.append(gap_anomaly(pathway_id, p, prev + 1))
        last_seq[p.gate] = p.seq
    return out
