"""Shipped descriptor and scenario fixtures.

``room_controller.fbsys`` (one room plus the HVAC main controller) and
``two_room.fbsys`` are generated from ``types.fbsys`` and ``room.template``
by :func:`build_system_text`; ``python -m fbdiag.hvac.fixtures`` rewrites them.
"""

from pathlib import Path

FIXTURES = Path(__file__).with_name("fixtures")
SCENARIOS = Path(__file__).with_name("scenarios")

ROOM_CONTROLLER = FIXTURES / "room_controller.fbsys"
TWO_ROOM = FIXTURES / "two_room.fbsys"


def room_params(index):
    """Naming and DP numbering of room ``index`` (1-based)."""
    base = 5 * (index - 1)
    return {
        "room": f"ROOM{index}",
        "sfx": "" if index == 1 else f"_{index}",
        "n": index,
        "pathway": "temp" if index == 1 else f"temp_{index}",
        "dp1": base + 1, "dp2": base + 2, "dp3": base + 3, "dp4": base + 4, "dp5": base + 5,
    }


def build_system_text(rooms=1):
    types = (FIXTURES / "types.fbsys").read_text(encoding="utf-8")
    template = (FIXTURES / "room.template").read_text(encoding="utf-8")
    out = [f"# Generated by fbdiag.hvac.fixtures: {rooms} room controller(s) + HVAC main.", "",
           types.rstrip(), ""]
    for i in range(1, rooms + 1):
        out.append(f"device ROOM{i}_DEV")
    out.append("device MAIN_DEV")
    out.append("")
    out.append("subapp HVAC_MAIN on MAIN_DEV")
    for i in range(1, rooms + 1):
        out.append(f"  instance HVAC_Z{i} : HVAC_ZONE_CTL")
        out.append(f"  instance HVAC_ACT{i} : HVAC_ACTUATOR")
    out.append("end_subapp")
    out.append("")
    for i in range(1, rooms + 1):
        out.append(template.format(**room_params(i)).rstrip())
        out.append("")
    return "\n".join(out)


def fixture_text(name):
    return (FIXTURES / name).read_text(encoding="utf-8")


def scenario_path(name):
    return SCENARIOS / (name if name.endswith(".json") else name + ".json")


def _write_fixtures():
    ROOM_CONTROLLER.write_text(build_system_text(1), encoding="utf-8")
    TWO_ROOM.write_text(build_system_text(2), encoding="utf-8")


if __name__ == "__main__":
    _write_fixtures()

