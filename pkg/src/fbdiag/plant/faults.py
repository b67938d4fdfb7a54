"""Sensor, actuator and software fault modes plus scripted schedules."""

from dataclasses import dataclass
from typing import Optional

from ..errors import UnknownTarget

SENSOR = "sensor"
ACTUATOR = "actuator"
SOFTWARE = "software"
TARGETS = (SENSOR, ACTUATOR, SOFTWARE)

ACTIVATE = "activate"
CLEAR = "clear"

BUTTON_UP = "ButtonUp"
BUTTON_DOWN = "ButtonDown"


@dataclass(frozen=True)
class OutOfTolerance:
    offset_f: float


@dataclass(frozen=True)
class ElectronicsBias:
    reported_const_f: Optional[float] = None
    scale: Optional[float] = None

    def __post_init__(self):
        if (self.reported_const_f is None) == (self.scale is None):
            raise ValueError("ElectronicsBias needs exactly one of reported_const_f, scale")


@dataclass(frozen=True)
class Intermittent:
    noise_amp_f: float
    dropout_prob: float

    def __post_init__(self):
        if not self.noise_amp_f > 0:
            raise ValueError("Intermittent noise amplitude must be positive")
        if not 0 <= self.dropout_prob < 1:
            raise ValueError("dropout probability must be in [0, 1)")


@dataclass(frozen=True)
class BlockedDuct:
    pass


@dataclass(frozen=True)
class MisreportedVent:
    pos_offset: float


@dataclass(frozen=True)
class StuckVent:
    pos: float


@dataclass(frozen=True)
class SoftwareFault:
    """Range-gated additive error in the Fahrenheit-to-Celsius conversion."""

    lo_f: float
    hi_f: float
    offset_f: float

    @property
    def offset_c(self):
        return self.offset_f * 5.0 / 9.0


_MODES = {
    "OutOfTolerance": (SENSOR, OutOfTolerance),
    "ElectronicsBias": (SENSOR, ElectronicsBias),
    "Intermittent": (SENSOR, Intermittent),
    "BlockedDuct": (ACTUATOR, BlockedDuct),
    "MisreportedVent": (ACTUATOR, MisreportedVent),
    "StuckVent": (ACTUATOR, StuckVent),
    "Software": (SOFTWARE, SoftwareFault),
}


def mode_from_dict(d):
    """Build a fault mode from ``{"type": name, **fields}``."""
    if d is None:
        return None
    fields = dict(d)
    name = fields.pop("type")
    try:
        _, cls = _MODES[name]
    except KeyError:
        raise UnknownTarget(f"unknown fault mode {name!r}") from None
    return cls(**fields)


def mode_to_dict(mode):
    if mode is None:
        return None
    for name, (_, cls) in _MODES.items():
        if type(mode) is cls:
            return {"type": name, **{k: v for k, v in vars(mode).items() if v is not None}}
    raise TypeError(mode)


def target_of(mode):
    for _, (target, cls) in _MODES.items():
        if type(mode) is cls:
            return target
    raise TypeError(mode)


@dataclass(frozen=True)
class FaultEntry:
    time_ms: int
    target: str
    zone: str
    mode: object = None
    action: str = ACTIVATE

    def __post_init__(self):
        if self.target not in TARGETS:
            raise UnknownTarget(f"unknown fault target {self.target!r}")
        if self.action not in (ACTIVATE, CLEAR):
            raise ValueError(f"fault action must be activate or clear, not {self.action!r}")
        if self.action == ACTIVATE and (self.mode is None or target_of(self.mode) != self.target):
            raise ValueError(f"{self.mode!r} cannot be applied to the {self.target}")

    @classmethod
    def from_dict(cls, d):
        return cls(int(d["t"]), d["target"], d.get("zone", "ROOM1"),
                   mode_from_dict(d.get("mode")), d.get("action", ACTIVATE))

    def to_dict(self):
        out = {"t": self.time_ms, "target": self.target, "zone": self.zone,
               "action": self.action}
        if self.mode is not None:
            out["mode"] = mode_to_dict(self.mode)
        return out


@dataclass(frozen=True)
class OccupantAction:
    time_ms: int
    zone: str
    button: str

    def __post_init__(self):
        if self.button not in (BUTTON_UP, BUTTON_DOWN):
            raise ValueError(f"unknown button {self.button!r}")

    @classmethod
    def from_dict(cls, d):
        return cls(int(d["t"]), d.get("zone", "ROOM1"), d["button"])

    def to_dict(self):
        return {"t": self.time_ms, "zone": self.zone, "button": self.button}


def check_ordered(entries):
    """Schedules must have non-decreasing times."""
    for a, b in zip(entries, entries[1:]):
        if b.time_ms < a.time_ms:
            raise ValueError(f"schedule times decrease: {a.time_ms} then {b.time_ms}")
    return list(entries)
