"""Co-simulation harness binding the HVAC FB network to the zone plant."""

import logging
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from ..errors import UnknownTarget
from ..plant import (
    ACTIVATE, ACTUATOR, BUTTON_UP, SENSOR, SOFTWARE, FaultEntry, OccupantAction, PlantParams,
    PlantState, check_ordered, plant_step, read_sensor_f,
)
from ..plant.model import MODE_FROM_INT
from ..runtime import instantiate
from .rooms import discover_rooms
from .timing import TimingMonitor

log = logging.getLogger(__name__)

SENSOR_PERIOD_MS = 100
SWITCH_PERIOD_MS = 100


@dataclass
class Hmi:
    """Occupant-facing state of one zone: latched presses and the display."""

    pending: Dict[str, int] = field(default_factory=lambda: {"up": 0, "down": 0})
    display_temp: Optional[float] = None
    display_set: Optional[float] = None
    fault_lamp: bool = False
    presses: int = 0


class SensorBehavior:
    def __init__(self, sim, zone, period_ms):
        self.sim = sim
        self.zone = zone
        self.period_ms = period_ms
        self.samples = 0

    def on_timer(self, inst):
        state = self.sim.plant[self.zone]
        inst.set("TEMP", read_sensor_f(state, state.sensor_fault))
        self.samples += 1
        inst.fire("SAMPLED")

    def on_event(self, inst, port):
        pass


class SwitchBehavior:
    def __init__(self, sim, zone, key, period_ms):
        self.sim = sim
        self.zone = zone
        self.key = key
        self.period_ms = period_ms

    def on_timer(self, inst):
        pending = self.sim.hmi[self.zone].pending
        if pending[self.key]:
            pending[self.key] -= 1
            inst.fire("PRESSED")

    def on_event(self, inst, port):
        pass


class DisplayBehavior:
    def __init__(self, sim, zone):
        self.sim = sim
        self.zone = zone

    def on_event(self, inst, port):
        hmi = self.sim.hmi[self.zone]
        if port == "DISP_TEMP":
            hmi.display_temp = inst.get("DISP_T")
        elif port == "SET_TEMP":
            hmi.display_set = inst.get("SET_T")
            self.sim.plant[self.zone].setpoint_c = hmi.display_set
        elif port == "FAULT_LAMP":
            hmi.fault_lamp = inst.get("FAULT")


class ActuatorBehavior:
    def __init__(self, sim, zone):
        self.sim = sim
        self.zone = zone
        self.commands = 0

    def on_event(self, inst, port):
        self.commands += 1
        self.sim.plant[self.zone].mode = MODE_FROM_INT[inst.get("MODE")]


@dataclass
class RunStats:
    duration_ms: int
    wall_s: float
    events_processed: int
    quanta: int
    missed_samples: int
    samples: Dict[str, int]

    @property
    def per_tick_us(self):
        return 1e6 * self.wall_s / self.quanta if self.quanta else 0.0


class HvacSim:
    """One FB application (all devices) stepped in lockstep with per-zone plants.

    Plant zones, HMI state and service FBs are keyed by room subapp name.
    Fault entries and occupant actions are applied at the start of the first
    quantum at or after their time; the plant advances every ``plant_dt_ms``
    just before the sensors sample.
    """

    def __init__(self, descriptor, *, seed=0, tick_ms=10, plant_params=None, zones=None,
                 faults=(), occupant=(), sensor_period_ms=SENSOR_PERIOD_MS,
                 switch_period_ms=SWITCH_PERIOD_MS, plant_dt_ms=None):
        self.descriptor = descriptor
        self.seed = seed
        self.rooms = discover_rooms(descriptor)
        if not self.rooms:
            raise UnknownTarget("descriptor has no room with a temperature sensor")
        self.room = {r.zone: r for r in self.rooms}
        self.params = plant_params or PlantParams()
        self.plant_dt_ms = plant_dt_ms or sensor_period_ms
        zones = zones or {}
        self.plant = {}
        for r in self.rooms:
            init = dict(zones.get(r.zone, {}))
            zone_t = float(init.pop("zone_temp_c", 21.0))
            self.plant[r.zone] = PlantState(
                zone_temp_c=zone_t, outside_temp_c=float(init.pop("outside_temp_c", zone_t)),
                rng_seed=f"{seed}:{r.zone}")
            if init:
                raise ValueError(f"unknown zone settings {sorted(init)}")
        self.hmi = {r.zone: Hmi() for r in self.rooms}
        self.faults = check_ordered([f if isinstance(f, FaultEntry) else FaultEntry.from_dict(f)
                                     for f in faults])
        self.occupant = check_ordered([a if isinstance(a, OccupantAction)
                                       else OccupantAction.from_dict(a) for a in occupant])
        for entry in self.faults:
            self._room_of(entry.zone)
        for act in self.occupant:
            self._room_of(act.zone)
        self._fault_i = 0
        self._occ_i = 0
        self.applied = []
        self.sensors = {}
        self.actuators = {}
        zone_of = {}
        for r in self.rooms:
            for name in r.members():
                zone_of[name] = r.zone
        self.zone_of = zone_of

        def sensor(inst):
            b = SensorBehavior(self, zone_of[inst.name], sensor_period_ms)
            self.sensors[inst.name] = b
            return b

        def actuator(inst):
            b = ActuatorBehavior(self, zone_of[inst.name])
            self.actuators[inst.name] = b
            return b

        builtins = {
            "PTR_SENSOR": sensor,
            "BUTTON_UP": lambda inst: SwitchBehavior(self, zone_of[inst.name], "up",
                                                     switch_period_ms),
            "BUTTON_DOWN": lambda inst: SwitchBehavior(self, zone_of[inst.name], "down",
                                                       switch_period_ms),
            "DISPLAY": lambda inst: DisplayBehavior(self, zone_of[inst.name]),
            "HVAC_ACTUATOR": actuator,
        }
        self.app = instantiate(descriptor, builtins, tick_ms)
        self.timing = TimingMonitor(self.rooms)
        self.app.pre_quantum.append(self._pre_quantum)
        self.quanta = 0
        self.wall_s = 0.0

    def _room_of(self, zone):
        try:
            return self.room[zone]
        except KeyError:
            raise UnknownTarget(f"unknown zone {zone!r}") from None

    # scripted inputs

    def apply_fault(self, entry):
        """Route a schedule entry to the sensor, actuator or conversion FB of its zone."""
        room = self._room_of(entry.zone)
        state = self.plant[entry.zone]
        mode = entry.mode if entry.action == ACTIVATE else None
        if entry.target == SENSOR:
            state.sensor_fault = mode
        elif entry.target == ACTUATOR:
            state.actuator_fault = mode
        elif entry.target == SOFTWARE:
            conv = self.app.instance(room.conv)
            conv.set("SW_FAULT", mode is not None)
            if mode is not None:
                conv.set("SW_LO_F", mode.lo_f)
                conv.set("SW_HI_F", mode.hi_f)
                conv.set("SW_OFFSET_C", mode.offset_c)
        else:
            raise UnknownTarget(entry.target)
        self.applied.append((self.app.clock, entry))
        log.info("t=%d applied %s", self.app.clock, entry)

    def press(self, zone, button, at=None):
        """Latch a press; latency budgets count from ``at`` (default: now)."""
        hmi = self.hmi[self._room_of(zone).zone]
        hmi.pending["up" if button == BUTTON_UP else "down"] += 1
        hmi.presses += 1
        self.timing.press(zone, self.app.clock if at is None else at)

    def _pre_quantum(self, app, t):
        self.quanta += 1
        faults = self.faults
        while self._fault_i < len(faults) and faults[self._fault_i].time_ms <= t:
            self.apply_fault(faults[self._fault_i])
            self._fault_i += 1
        occ = self.occupant
        while self._occ_i < len(occ) and occ[self._occ_i].time_ms <= t:
            a = occ[self._occ_i]
            self.press(a.zone, a.button, a.time_ms)
            self._occ_i += 1
        dt = self.plant_dt_ms
        if t and t % dt == 0:
            params = self.params
            for state in self.plant.values():
                plant_step(state, dt, params)

    # running

    def run(self, until_ms, chunk_ms=1000, sink=None):
        """Advance to ``until_ms``, streaming trace chunks to the timing monitor and ``sink``."""
        app = self.app
        t0 = time.perf_counter()
        while app.clock < until_ms:
            nxt = min(until_ms, (app.clock // chunk_ms + 1) * chunk_ms)
            app.run_until(nxt)
            records = app.take_trace()
            self.timing.feed(records)
            if sink is not None:
                sink(records)
        self.wall_s += time.perf_counter() - t0
        return self

    def expected_samples(self, period_ms=SENSOR_PERIOD_MS):
        return -(-self.app.clock // period_ms)

    def stats(self):
        samples = {name: b.samples for name, b in self.sensors.items()}
        expected = self.expected_samples()
        missed = sum(max(0, expected - n) for n in samples.values())
        return RunStats(self.app.clock, self.wall_s, self.app.events_processed, self.quanta,
                        missed, samples)

    def timing_summary(self):
        self.timing.close(self.app.clock)
        return self.timing.summary()


def occupant_presses(zone, start_ms, count, spacing_ms, button=BUTTON_UP) -> List[OccupantAction]:
    return [OccupantAction(start_ms + i * spacing_ms, zone, button) for i in range(count)]
