"""Locate each room controller and its main-controller channel in a descriptor."""

from dataclasses import dataclass
from typing import Optional

SENSOR_TYPE = "PTR_SENSOR"
CONV_TYPE = "F_TO_C_CONV"
CONTROLLER_TYPE = "ZONE_CONTROLLER"
UP_TYPE = "UP_SWITCH"
DOWN_TYPE = "DOWN_SWITCH"
DISPLAY_TYPE = "ZONE_DISPLAY"


@dataclass(frozen=True)
class RoomWiring:
    zone: str
    device: str
    sensor: str
    conv: str
    controller: str
    up: Optional[str]
    down: Optional[str]
    display: Optional[str]
    hvac: Optional[str]
    actuator: Optional[str]

    def members(self):
        return [n for n in (self.sensor, self.conv, self.controller, self.up, self.down,
                            self.display, self.hvac, self.actuator) if n]


def _follow(desc, src, port):
    for c in desc.event_connections:
        if c.src == src and c.src_port == port:
            return c.dst
    return None


def discover_rooms(desc):
    """One RoomWiring per subapp that owns a temperature sensor; zone = subapp name."""
    rooms = []
    for sa in desc.subapps:
        by_type = {}
        for inst in sa.instances:
            by_type.setdefault(inst.type_ref, inst.name)
        if SENSOR_TYPE not in by_type:
            continue
        controller = by_type.get(CONTROLLER_TYPE)
        hvac = _follow(desc, controller, "ZONE_TEMP") if controller else None
        actuator = _follow(desc, hvac, "MODE_CHG") if hvac else None
        rooms.append(RoomWiring(
            zone=sa.name, device=sa.device, sensor=by_type[SENSOR_TYPE],
            conv=by_type.get(CONV_TYPE), controller=controller, up=by_type.get(UP_TYPE),
            down=by_type.get(DOWN_TYPE), display=by_type.get(DISPLAY_TYPE), hvac=hvac,
            actuator=actuator))
    return rooms
