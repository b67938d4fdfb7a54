"""Declarative model of a function-block system."""

from dataclasses import dataclass, field
from typing import Any, Optional, Tuple

IN = "in"
OUT = "out"
EVENT = "event"
DATA = "data"
BASIC = "basic"
SERVICE = "service"
MAINLINE = "mainline"
BRANCH = "branch"

_pos = dict(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class PortDecl:
    name: str
    direction: str
    kind: str
    value_type: Optional[str] = None
    initial: Any = None
    with_assoc: Tuple[str, ...] = ()
    pos: Tuple[int, int] = field(**_pos)


@dataclass(frozen=True)
class VarDecl:
    name: str
    value_type: str
    initial: Any
    pos: Tuple[int, int] = field(**_pos)


@dataclass(frozen=True)
class AlgorithmDecl:
    """Either ``body`` (parsed statements) or ``builtin`` (host registry name)."""

    name: str
    body: Optional[tuple] = None
    builtin: Optional[str] = None
    pos: Tuple[int, int] = field(**_pos)


@dataclass(frozen=True)
class ECAction:
    algorithm: Optional[str] = None
    output: Optional[str] = None


@dataclass(frozen=True)
class ECState:
    name: str
    actions: Tuple[ECAction, ...] = ()
    pos: Tuple[int, int] = field(**_pos)


@dataclass(frozen=True)
class ECTransition:
    source: str
    target: str
    trigger: Optional[str] = None
    guard: Any = None  # expression tree; None means literal TRUE
    pos: Tuple[int, int] = field(**_pos)


@dataclass(frozen=True)
class FBTypeDecl:
    name: str
    kind: str
    interface: Tuple[PortDecl, ...] = ()
    internal_vars: Tuple[VarDecl, ...] = ()
    algorithms: Tuple[AlgorithmDecl, ...] = ()
    states: Tuple[ECState, ...] = ()
    transitions: Tuple[ECTransition, ...] = ()
    builtin_binding: Optional[str] = None
    pos: Tuple[int, int] = field(**_pos)

    def port(self, name):
        for p in self.interface:
            if p.name == name:
                return p
        return None

    def ports(self, direction=None, kind=None):
        return [p for p in self.interface
                if (direction is None or p.direction == direction)
                and (kind is None or p.kind == kind)]

    def algorithm(self, name):
        for a in self.algorithms:
            if a.name == name:
                return a
        return None

    @property
    def initial_state(self):
        return self.states[0].name if self.states else None


@dataclass(frozen=True)
class InstanceDecl:
    name: str
    type_ref: str
    pos: Tuple[int, int] = field(**_pos)


@dataclass(frozen=True)
class SubApp:
    name: str
    device: str
    instances: Tuple[InstanceDecl, ...] = ()
    pos: Tuple[int, int] = field(**_pos)


@dataclass(frozen=True)
class Connection:
    kind: str
    src: str
    src_port: str
    dst: str
    dst_port: str
    pos: Tuple[int, int] = field(**_pos)

    def __str__(self):
        return f"{self.kind} {self.src}.{self.src_port} -> {self.dst}.{self.dst_port}"

    @property
    def key(self):
        return (self.kind, self.src, self.src_port, self.dst, self.dst_port)


@dataclass(frozen=True)
class DiagnosticPointDecl:
    id: int
    pathway: str
    order: int
    role: str
    location: Connection
    pos: Tuple[int, int] = field(**_pos)


@dataclass(frozen=True)
class SystemDescriptor:
    fb_types: Tuple[FBTypeDecl, ...] = ()
    devices: Tuple[str, ...] = ()
    subapps: Tuple[SubApp, ...] = ()
    event_connections: Tuple[Connection, ...] = ()
    data_connections: Tuple[Connection, ...] = ()
    diagnostic_points: Tuple[DiagnosticPointDecl, ...] = ()

    def fb_type(self, name):
        for t in self.fb_types:
            if t.name == name:
                return t
        return None

    def instances(self):
        """Yield ``(instance, subapp)`` pairs in declaration order."""
        for sa in self.subapps:
            for inst in sa.instances:
                yield inst, sa

    def instance_type(self, name):
        for inst, _ in self.instances():
            if inst.name == name:
                return self.fb_type(inst.type_ref)
        return None

    def instance_subapp(self, name):
        for inst, sa in self.instances():
            if inst.name == name:
                return sa.name
        return None

    def dp(self, dp_id):
        for d in self.diagnostic_points:
            if d.id == dp_id:
                return d
        return None

    @property
    def connections(self):
        return self.event_connections + self.data_connections


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    line: int = 0
    col: int = 0

    def __str__(self):
        return f"{self.line}:{self.col}: {self.code}: {self.message}"
