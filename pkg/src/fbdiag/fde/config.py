"""FDE configuration as carried by a scenario's ``fde`` section."""

from dataclasses import dataclass, field, fields
from typing import Dict, Optional, Tuple

from .belief import DEFAULT_LIKELIHOODS, DEFAULT_PRIOR, likelihood_row
from .rate import RateModel

OFF = "off"
MONITOR = "monitor"
AUTO = "auto"
MODES = (OFF, MONITOR, AUTO)

DEFAULT_TRIGGERS = ("consistency", "outlier", "latency", "error", "rate")


@dataclass
class FdeConfig:
    mode: str = MONITOR
    dps: Optional[Tuple[int, ...]] = None  # None: every annotated DP
    outlier_jump_f: float = 10.0
    consistency_tol_c: float = 0.05
    expected_latency_ms: int = 200
    ack_timeout_ms: int = 200
    rate: RateModel = field(default_factory=RateModel)
    zone_port: str = "ZONE_T"
    setpoint_port: str = "SET_T"
    prior: Dict[str, float] = field(default_factory=lambda: dict(DEFAULT_PRIOR))
    likelihoods: Dict[str, tuple] = field(default_factory=lambda: dict(DEFAULT_LIKELIHOODS))
    triggers: Tuple[str, ...] = DEFAULT_TRIGGERS
    plans: Optional[list] = None  # None: default plans for every pathway
    spacing_ms: int = 300
    repeat_ms: Optional[int] = None  # None: smallest FB timer period
    grace_ms: int = 2000
    max_diagnoses: int = 1

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"fde mode must be one of {MODES}, not {self.mode!r}")
        self.likelihoods = {k: likelihood_row(v) for k, v in self.likelihoods.items()}
        unknown = set(self.triggers) - set(DEFAULT_LIKELIHOODS)
        if unknown:
            raise ValueError(f"unknown triggers {sorted(unknown)}")

    @classmethod
    def from_dict(cls, d):
        d = dict(d or {})
        known = {f.name for f in fields(cls)}
        extra = set(d) - known
        if extra:
            raise ValueError(f"unknown fde settings {sorted(extra)}")
        if "rate" in d:
            d["rate"] = RateModel.from_dict(d["rate"])
        if "likelihoods" in d:
            merged = dict(DEFAULT_LIKELIHOODS)
            merged.update(d["likelihoods"])
            d["likelihoods"] = merged
        if d.get("dps") is not None:
            d["dps"] = tuple(d["dps"])
        if "triggers" in d:
            d["triggers"] = tuple(d["triggers"])
        return cls(**d)
