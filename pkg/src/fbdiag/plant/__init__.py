"""HVAC zone co-simulation plant."""

from .faults import (
    ACTIVATE, ACTUATOR, BUTTON_DOWN, BUTTON_UP, CLEAR, SENSOR, SOFTWARE, BlockedDuct,
    ElectronicsBias, FaultEntry, Intermittent, MisreportedVent, OccupantAction, OutOfTolerance,
    SoftwareFault, StuckVent, check_ordered, mode_from_dict, mode_to_dict,
)
from .model import (
    COOL, HEAT, IDLE, MODE_DIR, MODE_FROM_INT, PlantParams, PlantState, actuate, plant_step,
    read_sensor_f,
)

__all__ = [
    "ACTIVATE", "ACTUATOR", "BUTTON_DOWN", "BUTTON_UP", "CLEAR", "COOL", "HEAT", "IDLE",
    "MODE_DIR", "MODE_FROM_INT", "SENSOR", "SOFTWARE", "BlockedDuct", "ElectronicsBias",
    "FaultEntry", "Intermittent", "MisreportedVent", "OccupantAction", "OutOfTolerance",
    "PlantParams", "PlantState", "SoftwareFault", "StuckVent", "actuate", "check_ordered",
    "mode_from_dict", "mode_to_dict", "plant_step", "read_sensor_f",
]
