"""Discrete belief over the fixed fault-hypothesis space."""

import math

SENSOR_FAULT = "SensorFault"
CONVERSION_FAULT = "ConversionFault"
CONTROLLER_FAULT = "ControllerFault"
ACTUATOR_OR_PLANT_FAULT = "ActuatorOrPlantFault"
NO_FAULT = "NoFault"

# order doubles as the MAP tie-break
HYPOTHESES = (SENSOR_FAULT, CONVERSION_FAULT, CONTROLLER_FAULT, ACTUATOR_OR_PLANT_FAULT, NO_FAULT)

DEFAULT_PRIOR = {SENSOR_FAULT: 0.1, CONVERSION_FAULT: 0.1, CONTROLLER_FAULT: 0.1,
                 ACTUATOR_OR_PLANT_FAULT: 0.1, NO_FAULT: 0.6}

# evidence -> P(evidence | hypothesis), in HYPOTHESES order
DEFAULT_LIKELIHOODS = {
    "consistency": (0.1, 0.9, 0.05, 0.05, 0.01),
    "outlier": (0.9, 0.1, 0.05, 0.05, 0.05),
    "latency": (0.5, 0.5, 0.05, 0.05, 0.05),
    "error": (0.7, 0.3, 0.05, 0.05, 0.02),
    "rate": (0.1, 0.1, 0.2, 0.9, 0.01),
    "missing_ack": (0.05, 0.05, 0.3, 0.5, 0.05),
    "exonerate_monitor": (0.9, 0.05, 0.05, 0.1, 0.05),
    "exonerate_rate": (0.1, 0.05, 0.05, 0.9, 0.05),
}
SEGMENT_MATCH_FAULTY = 0.05
SEGMENT_MATCH_OTHER = 0.95
SEGMENT_MISMATCH_FAULTY = 0.95
SEGMENT_MISMATCH_OTHER = 0.05
SEGMENT_MISMATCH_NOFAULT = 0.01

MAP_TIE_TOL = 1e-12


def likelihood_row(row):
    """Accept a sequence in HYPOTHESES order or a hypothesis->value mapping."""
    if isinstance(row, dict):
        unknown = set(row) - set(HYPOTHESES)
        if unknown:
            raise ValueError(f"unknown hypotheses {sorted(unknown)}")
        row = tuple(float(row[h]) for h in HYPOTHESES)
    row = tuple(float(x) for x in row)
    if len(row) != len(HYPOTHESES):
        raise ValueError(f"likelihood row needs {len(HYPOTHESES)} entries")
    if any(not (x >= 0 and math.isfinite(x)) for x in row):
        raise ValueError(f"likelihoods must be finite and non-negative: {row}")
    return row


def segment_row(component, match):
    """Likelihood of a segment verdict given each hypothesis."""
    if component not in HYPOTHESES:
        raise ValueError(f"unknown component hypothesis {component!r}")
    out = []
    for h in HYPOTHESES:
        if match:
            out.append(SEGMENT_MATCH_FAULTY if h == component else SEGMENT_MATCH_OTHER)
        elif h == component:
            out.append(SEGMENT_MISMATCH_FAULTY)
        else:
            out.append(SEGMENT_MISMATCH_NOFAULT if h == NO_FAULT else SEGMENT_MISMATCH_OTHER)
    return tuple(out)


class Belief:
    """Normalized probability vector; updates multiply and renormalize."""

    __slots__ = ("p",)

    def __init__(self, prior=None):
        row = likelihood_row(prior if prior is not None else DEFAULT_PRIOR)
        self.p = self._normalize(row)

    @staticmethod
    def _normalize(row):
        total = math.fsum(row)
        if not total > 0 or not math.isfinite(total):
            raise ValueError("belief update left no probability mass")
        return tuple(x / total for x in row)

    def update(self, likelihood):
        row = likelihood_row(likelihood)
        self.p = self._normalize(tuple(a * b for a, b in zip(self.p, row)))
        return self

    def copy(self):
        b = Belief.__new__(Belief)
        b.p = self.p
        return b

    def __getitem__(self, hypothesis):
        return self.p[HYPOTHESES.index(hypothesis)]

    def as_dict(self):
        return dict(zip(HYPOTHESES, self.p))

    @property
    def map(self):
        top = max(self.p)
        for h, x in zip(HYPOTHESES, self.p):
            if x >= top - MAP_TIE_TOL:
                return h

    def __repr__(self):
        inner = ", ".join(f"{h}={x:.4f}" for h, x in zip(HYPOTHESES, self.p))
        return f"Belief({inner})"
