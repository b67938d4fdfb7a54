"""Fault pathways reconstructed from the descriptor's DP annotations."""

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Dict, Tuple

from ..errors import UnknownDp
from ..model.descriptor import BRANCH, MAINLINE
from .belief import CONTROLLER_FAULT, CONVERSION_FAULT


def f_to_c(f):
    return (f - 32.0) * 5.0 / 9.0


def identity(x):
    return x


TRANSFORMS: Dict[str, Callable] = {"f_to_c": f_to_c, "identity": identity}

# FB type between two adjacent mainline DPs -> (transform, suspected component)
SEGMENT_KINDS = {
    "F_TO_C_CONV": ("f_to_c", CONVERSION_FAULT),
    "ZONE_CONTROLLER": ("identity", CONTROLLER_FAULT),
}

ERROR_BRANCH = "error"
ACK_BRANCH = "ack"


@dataclass(frozen=True)
class Segment:
    src_dp: int
    dst_dp: int
    fb: str
    transform: str
    component: str
    error_dp: int = None

    def apply(self, value):
        return TRANSFORMS[self.transform](value)


@dataclass(frozen=True)
class FaultPathway:
    pathway_id: str
    subapp: str
    mainline: Tuple[int, ...]
    branches: Tuple[Tuple[int, str], ...]
    segments: Tuple[Segment, ...]
    expected_latency_ms: int = 200
    # DP port names used by the detectors
    ports: Tuple[Tuple[int, str], ...] = ()

    def branch(self, role):
        for dp, r in self.branches:
            if r == role:
                return dp
        return None

    def port(self, dp):
        return dict(self.ports).get(dp)

    @property
    def boundary(self):
        return (self.mainline[0], self.mainline[-1])

    @cached_property
    def dps(self):
        return tuple(sorted(set(self.mainline) | {d for d, _ in self.branches}))


def build_pathways(desc, expected_latency_ms=200):
    """Group DPs by pathway; mainline follows the order index.

    A branch ordered between two mainline DPs is that segment's error
    branch; a branch after the last mainline DP is the acknowledgement path.
    Each segment is named after the FB the mainline passes through.
    """
    groups = {}
    for d in desc.diagnostic_points:
        groups.setdefault(d.pathway, []).append(d)
    out = {}
    for pid, dps in groups.items():
        dps.sort(key=lambda d: d.order)
        mainline = [d for d in dps if d.role == MAINLINE]
        branches = []
        segments = []
        owner = desc.instance_subapp(mainline[0].location.dst) if mainline else None
        for a, b in zip(mainline, mainline[1:]):
            fb = a.location.dst
            tname = desc.instance_type(fb).name
            transform, component = SEGMENT_KINDS.get(tname, ("identity", CONTROLLER_FAULT))
            err = [d.id for d in dps if d.role == BRANCH and a.order < d.order < b.order]
            segments.append(Segment(a.id, b.id, fb, transform, component,
                                    err[0] if err else None))
        for d in dps:
            if d.role != BRANCH:
                continue
            role = ACK_BRANCH if mainline and d.order > mainline[-1].order else ERROR_BRANCH
            branches.append((d.id, role))
        ports = tuple((d.id, d.location.src_port) for d in dps)
        out[pid] = FaultPathway(pid, owner, tuple(d.id for d in mainline), tuple(branches),
                                tuple(segments), expected_latency_ms, ports)
    return out


def pathway_of_dp(pathways, dp_id):
    for p in pathways.values():
        if dp_id in p.dps:
            return p
    raise UnknownDp(f"DP {dp_id} belongs to no pathway")
