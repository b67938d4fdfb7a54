"""Self-contained scenario documents driving the HVAC co-simulation."""

import json
from dataclasses import dataclass, field
from pathlib import Path
from .errors import UnknownDp
from .fde.config import FdeConfig
from .model import load_system
from .plant import FaultEntry, OccupantAction, PlantParams, check_ordered


@dataclass
class Scenario:
    name: str
    system: Path
    duration_ms: int
    seed: int = 0
    tick_ms: int = 10
    occupant: list = field(default_factory=list)
    faults: list = field(default_factory=list)
    fde: FdeConfig = field(default_factory=lambda: FdeConfig(mode="off"))
    plant: PlantParams = field(default_factory=PlantParams)
    zones: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.duration_ms <= 0:
            raise ValueError("duration_ms must be positive")
        if self.tick_ms <= 0:
            raise ValueError("tick_ms must be positive")

    @classmethod
    def from_dict(cls, d, base=Path(".")):
        d = dict(d)
        known = {"name", "system", "duration_ms", "seed", "tick_ms", "occupant", "faults",
                 "fde", "plant", "zones", "description"}
        extra = set(d) - known
        if extra:
            raise ValueError(f"unknown scenario keys {sorted(extra)}")
        return cls(
            name=d.get("name", "scenario"),
            system=(base / d["system"]).resolve(),
            duration_ms=int(d["duration_ms"]),
            seed=int(d.get("seed", 0)),
            tick_ms=int(d.get("tick_ms", 10)),
            occupant=check_ordered([OccupantAction.from_dict(a) for a in d.get("occupant", [])]),
            faults=check_ordered([FaultEntry.from_dict(f) for f in d.get("faults", [])]),
            fde=FdeConfig.from_dict(d.get("fde", {"mode": "off"})),
            plant=PlantParams.from_dict(d.get("plant")),
            zones=d.get("zones", {}),
        )

    def load_descriptor(self):
        desc = load_system(self.system)
        if self.fde.dps is not None:
            for dp in self.fde.dps:
                if desc.dp(dp) is None:
                    raise UnknownDp(f"scenario {self.name}: unknown DP {dp}")
        return desc


def load_scenario(path):
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    return Scenario.from_dict(doc, base=path.parent)
