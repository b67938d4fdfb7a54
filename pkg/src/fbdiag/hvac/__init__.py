"""The HVAC room-controller application and its co-simulation harness."""

from .cosim import HvacSim, occupant_presses
from .fixtures import ROOM_CONTROLLER, TWO_ROOM, build_system_text, scenario_path
from .rooms import RoomWiring, discover_rooms
from .timing import REQUIREMENTS, TimingMonitor

__all__ = [
    "HvacSim", "REQUIREMENTS", "ROOM_CONTROLLER", "RoomWiring", "TWO_ROOM", "TimingMonitor",
    "build_system_text", "discover_rooms", "occupant_presses", "scenario_path",
]
