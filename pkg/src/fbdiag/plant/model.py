"""First-order thermal zone with a PTR sensor and a duct/vent actuator."""

import math
import random
from dataclasses import dataclass, field
from typing import Optional, Tuple

from .faults import (
    BlockedDuct, ElectronicsBias, Intermittent, MisreportedVent, OutOfTolerance, StuckVent,
)

HEAT = "Heat"
COOL = "Cool"
IDLE = "Idle"
MODE_DIR = {HEAT: 1, COOL: -1, IDLE: 0}
MODE_FROM_INT = {1: HEAT, -1: COOL, 0: IDLE}


@dataclass
class PlantParams:
    r_nom: float = 0.3  # degC/min at full airflow, the comfort-limited conditioning rate
    k_env: float = 0.02  # 1/min coupling to outside air
    walk_c: float = 0.05  # outside-temperature random-walk step bound per plant step
    band: Tuple[float, float] = (10.0, 35.0)

    @classmethod
    def from_dict(cls, d):
        d = dict(d or {})
        if "band" in d:
            d["band"] = tuple(d["band"])
        return cls(**d)


@dataclass
class PlantState:
    zone_temp_c: float = 21.0
    outside_temp_c: float = 21.0
    setpoint_c: float = 21.0
    mode: str = IDLE
    airflow: float = 0.0
    reported_vent_pos: float = 0.0
    rng_seed: object = 0
    sensor_fault: object = None
    actuator_fault: object = None
    last_reading_f: Optional[float] = None
    env_rng: random.Random = field(default=None, repr=False)
    sensor_rng: random.Random = field(default=None, repr=False)

    def __post_init__(self):
        if self.env_rng is None:
            self.env_rng = random.Random(f"env:{self.rng_seed}")
        if self.sensor_rng is None:
            self.sensor_rng = random.Random(f"sensor:{self.rng_seed}")


def _clamp01(x):
    return min(1.0, max(0.0, x))


def actuate(state):
    """Derive actual airflow and the reported vent position from the mode."""
    commanded = 0.0 if state.mode == IDLE else 1.0
    fault = state.actuator_fault
    if fault is None:
        actual = commanded
        reported = commanded
    elif isinstance(fault, BlockedDuct):
        actual = 0.0
        reported = commanded
    elif isinstance(fault, MisreportedVent):
        # positioning loop trusts a sensor that reads pos_offset too high
        actual = _clamp01(commanded - fault.pos_offset)
        reported = _clamp01(actual + fault.pos_offset)
    elif isinstance(fault, StuckVent):
        actual = _clamp01(fault.pos)
        reported = actual
    else:
        raise TypeError(f"not an actuator fault: {fault!r}")
    state.airflow = actual
    state.reported_vent_pos = reported
    return state


def plant_step(state, dt_ms, params=None):
    """Advance the zone by ``dt_ms`` and the outside temperature by one walk step."""
    if dt_ms <= 0:
        raise ValueError("dt_ms must be positive")
    p = params or PlantParams()
    actuate(state)
    dt_min = dt_ms / 60000.0
    rate = (p.k_env * (state.outside_temp_c - state.zone_temp_c)
            + p.r_nom * MODE_DIR[state.mode] * state.airflow)
    state.zone_temp_c += dt_min * rate
    if p.walk_c:
        lo, hi = p.band
        walked = state.outside_temp_c + state.env_rng.uniform(-p.walk_c, p.walk_c)
        state.outside_temp_c = min(hi, max(lo, walked))
    if not math.isfinite(state.zone_temp_c):
        raise FloatingPointError("zone temperature diverged")
    return state


def read_sensor_f(state, fault=None, rng=None):
    """One Fahrenheit reading of the zone through the (possibly faulty) PTR."""
    rng = rng or state.sensor_rng
    truth = state.zone_temp_c * 9.0 / 5.0 + 32.0
    if fault is None:
        value = truth
    elif isinstance(fault, OutOfTolerance):
        value = truth + fault.offset_f
    elif isinstance(fault, ElectronicsBias):
        value = fault.reported_const_f if fault.reported_const_f is not None else truth * fault.scale
    elif isinstance(fault, Intermittent):
        amp = fault.noise_amp_f
        if rng.random() < fault.dropout_prob:
            last = truth if state.last_reading_f is None else state.last_reading_f
            value = last + rng.uniform(-amp, amp) * 5
        else:
            value = truth + rng.uniform(-amp, amp)
    else:
        raise TypeError(f"not a sensor fault: {fault!r}")
    state.last_reading_f = value
    return value
