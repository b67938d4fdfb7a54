"""Reader and writer for the ``.fbsys`` descriptor format.

The grammar is documented in ``docs/fbsys-grammar.md``. Errors carry the
1-based line and column of the offending text.
"""

import re

from ..errors import DescriptorError, ParseError
from . import algo, ast
from .descriptor import (
    BASIC, DATA, EVENT, IN, OUT, SERVICE, AlgorithmDecl, Connection, Diagnostic,
    DiagnosticPointDecl, ECAction, ECState, ECTransition, FBTypeDecl, InstanceDecl,
    PortDecl, SubApp, SystemDescriptor, VarDecl,
)
from .values import KINDS, coerce, default_value, format_literal

_ID = r"[A-Za-z_][A-Za-z0-9_]*"
_EP = rf"({_ID})\.({_ID})"

_RE = {
    "fbtype": re.compile(rf"fbtype\s+({_ID})\s+(basic|service)(?:\s+({_ID}))?$"),
    "event": re.compile(rf"(event_in|event_out)\s+({_ID})(?:\s+with\s+(.+))?$"),
    "data": re.compile(rf"(data_in|data_out|var)\s+({_ID})\s+({_ID})(?:\s*=\s*(.+))?$"),
    "algorithm": re.compile(rf"algorithm\s+({_ID})(?:\s+builtin\s+({_ID}))?$"),
    "state": re.compile(rf"state\s+({_ID})$"),
    "action": re.compile(rf"action(?:\s+({_ID}))?(?:\s*->\s*({_ID}))?$"),
    "transition": re.compile(
        rf"transition\s+({_ID})\s*->\s*({_ID})(?:\s+on\s+({_ID}))?(?:\s+when\s+(.+))?$"),
    "device": re.compile(rf"device\s+({_ID})$"),
    "subapp": re.compile(rf"subapp\s+({_ID})\s+on\s+({_ID})$"),
    "instance": re.compile(rf"instance\s+({_ID})\s*:\s*({_ID})$"),
    "connect": re.compile(rf"connect\s+(event|data)\s+{_EP}\s*->\s*{_EP}$"),
    "dp": re.compile(
        rf"dp\s+(\d+)\s+pathway\s+({_ID})(?:\s+order\s+(\d+))?\s+(mainline|branch)"
        rf"\s+on\s+(event|data)\s+{_EP}\s*->\s*{_EP}$"),
}


def _strip_comment(line):
    i = line.find("#")
    return line if i < 0 else line[:i]


def _literal(text, kind, line, col):
    expr = algo.parse_expression(text, line, col)
    if not isinstance(expr, ast.Lit):
        raise ParseError("initial value must be a literal", line, col)
    try:
        return coerce(expr.value, kind)
    except TypeError as e:
        raise ParseError(str(e), line, col) from None


class _TypeBuilder:
    def __init__(self, name, kind, binding, pos):
        self.name = name
        self.kind = kind
        self.binding = binding
        self.pos = pos
        self.ports = []
        self.vars = []
        self.algorithms = []
        self.states = []  # [name, [actions], pos]
        self.transitions = []

    def build(self):
        return FBTypeDecl(
            self.name, self.kind, tuple(self.ports), tuple(self.vars), tuple(self.algorithms),
            tuple(ECState(n, tuple(a), pos=p) for n, a, p in self.states),
            tuple(self.transitions), self.binding, pos=self.pos)


def parse_system_unchecked(text):
    """Parse without semantic validation; raises ParseError on bad syntax."""
    types, devices, subapps, events, datas, dps = [], [], [], [], [], []
    cur_type = None
    cur_sub = None
    alg = None  # (name, start_line, lines, pos)
    lines = text.splitlines()
    for lineno, raw in enumerate(lines, 1):
        if alg is not None:
            if raw.strip() == "end_algorithm":
                name, start, body_lines, pos = alg
                body = algo.parse_algorithm("\n".join(body_lines), start, 1)
                cur_type.algorithms.append(AlgorithmDecl(name, body=body, pos=pos))
                alg = None
            else:
                alg[2].append(raw)
            continue
        content = _strip_comment(raw)
        stripped = content.strip()
        if not stripped:
            continue
        col = len(content) - len(content.lstrip()) + 1
        pos = (lineno, col)
        word = stripped.split()[0]

        def match(key):
            m = _RE[key].match(stripped)
            if not m:
                raise ParseError(f"malformed {word!r} line", lineno, col)
            return m

        def gcol(m, g):
            return col + m.start(g)

        if cur_type is not None:
            if word == "end_fbtype":
                types.append(cur_type.build())
                cur_type = None
            elif word in ("event_in", "event_out"):
                m = match("event")
                assoc = ()
                if m.group(3):
                    assoc = tuple(a.strip() for a in m.group(3).split(","))
                    if not all(re.fullmatch(_ID, a) for a in assoc):
                        raise ParseError("bad WITH list", lineno, gcol(m, 3))
                direction = IN if m.group(1) == "event_in" else OUT
                cur_type.ports.append(PortDecl(m.group(2), direction, EVENT, with_assoc=assoc, pos=pos))
            elif word in ("data_in", "data_out", "var"):
                m = match("data")
                vt = m.group(3)
                if vt not in KINDS:
                    raise ParseError(f"unknown value type {vt!r}", lineno, gcol(m, 3))
                init = default_value(vt)
                if m.group(4):
                    init = _literal(m.group(4), vt, lineno, gcol(m, 4))
                if m.group(1) == "var":
                    cur_type.vars.append(VarDecl(m.group(2), vt, init, pos=pos))
                else:
                    direction = IN if m.group(1) == "data_in" else OUT
                    cur_type.ports.append(PortDecl(m.group(2), direction, DATA, vt, init, pos=pos))
            elif word == "algorithm":
                m = match("algorithm")
                if m.group(2):
                    cur_type.algorithms.append(AlgorithmDecl(m.group(1), builtin=m.group(2), pos=pos))
                else:
                    alg = (m.group(1), lineno + 1, [], pos)
            elif word == "state":
                m = match("state")
                cur_type.states.append([m.group(1), [], pos])
            elif word == "action":
                m = match("action")
                if not cur_type.states:
                    raise ParseError("action outside a state", lineno, col)
                if not m.group(1) and not m.group(2):
                    raise ParseError("empty action", lineno, col)
                cur_type.states[-1][1].append(ECAction(m.group(1), m.group(2)))
            elif word == "transition":
                m = match("transition")
                guard = None
                if m.group(4):
                    guard = algo.parse_expression(m.group(4), lineno, gcol(m, 4))
                cur_type.transitions.append(
                    ECTransition(m.group(1), m.group(2), m.group(3), guard, pos=pos))
            else:
                raise ParseError(f"unexpected {word!r} inside fbtype", lineno, col)
            continue
        if cur_sub is not None:
            if word == "end_subapp":
                subapps.append(SubApp(cur_sub[0], cur_sub[1], tuple(cur_sub[2]), pos=cur_sub[3]))
                cur_sub = None
            elif word == "instance":
                m = match("instance")
                cur_sub[2].append(InstanceDecl(m.group(1), m.group(2), pos=pos))
            else:
                raise ParseError(f"unexpected {word!r} inside subapp", lineno, col)
            continue
        if word == "fbtype":
            m = match("fbtype")
            kind = m.group(2)
            if kind == SERVICE and not m.group(3):
                raise ParseError("service fbtype needs a builtin binding", lineno, col)
            if kind == BASIC and m.group(3):
                raise ParseError("basic fbtype takes no builtin binding", lineno, gcol(m, 3))
            cur_type = _TypeBuilder(m.group(1), kind, m.group(3), pos)
        elif word == "device":
            devices.append(match("device").group(1))
        elif word == "subapp":
            m = match("subapp")
            cur_sub = (m.group(1), m.group(2), [], pos)
        elif word == "connect":
            m = match("connect")
            conn = Connection(m.group(1), m.group(2), m.group(3), m.group(4), m.group(5), pos=pos)
            (events if conn.kind == EVENT else datas).append(conn)
        elif word == "dp":
            m = match("dp")
            dp_id = int(m.group(1))
            order = int(m.group(3)) if m.group(3) else dp_id
            loc = Connection(m.group(5), m.group(6), m.group(7), m.group(8), m.group(9), pos=pos)
            dps.append(DiagnosticPointDecl(dp_id, m.group(2), order, m.group(4), loc, pos=pos))
        else:
            raise ParseError(f"unknown section {word!r}", lineno, col)
    end = (len(lines), 1)
    if alg is not None:
        raise ParseError("missing end_algorithm", *end)
    if cur_type is not None:
        raise ParseError("missing end_fbtype", *end)
    if cur_sub is not None:
        raise ParseError("missing end_subapp", *end)
    return SystemDescriptor(tuple(types), tuple(devices), tuple(subapps), tuple(events),
                            tuple(datas), tuple(dps))


def parse_system(text):
    """Parse and validate a descriptor document.

    Raises DescriptorError carrying every diagnostic when the document is
    malformed or violates a structural invariant.
    """
    from .validate import validate

    try:
        desc = parse_system_unchecked(text)
    except ParseError as e:
        raise DescriptorError([Diagnostic("SyntaxError", e.message, e.line, e.col)]) from None
    diags = validate(desc)
    if diags:
        raise DescriptorError(diags)
    return desc


def load_system(path):
    with open(path, encoding="utf-8") as fh:
        return parse_system(fh.read())


# writer


def _port_line(p):
    if p.kind == EVENT:
        s = f"  {'event_in' if p.direction == IN else 'event_out'} {p.name}"
        if p.with_assoc:
            s += " with " + ", ".join(p.with_assoc)
        return s
    return (f"  {'data_in' if p.direction == IN else 'data_out'} {p.name} {p.value_type}"
            f" = {format_literal(p.initial)}")


def format_system(desc):
    out = []
    for t in desc.fb_types:
        head = f"fbtype {t.name} {t.kind}"
        if t.builtin_binding:
            head += f" {t.builtin_binding}"
        out.append(head)
        out.extend(_port_line(p) for p in t.interface)
        out.extend(f"  var {v.name} {v.value_type} = {format_literal(v.initial)}"
                   for v in t.internal_vars)
        for a in t.algorithms:
            if a.builtin:
                out.append(f"  algorithm {a.name} builtin {a.builtin}")
            else:
                out.append(f"  algorithm {a.name}")
                out.extend(algo.format_statements(a.body, "    "))
                out.append("end_algorithm")
        for s in t.states:
            out.append(f"  state {s.name}")
            for a in s.actions:
                parts = ["    action"]
                if a.algorithm:
                    parts.append(f" {a.algorithm}")
                if a.output:
                    parts.append(f" -> {a.output}")
                out.append("".join(parts))
        for tr in t.transitions:
            s = f"  transition {tr.source} -> {tr.target}"
            if tr.trigger:
                s += f" on {tr.trigger}"
            if tr.guard is not None:
                s += f" when {algo.format_expression(tr.guard)}"
            out.append(s)
        out.append("end_fbtype")
        out.append("")
    out.extend(f"device {d}" for d in desc.devices)
    for sa in desc.subapps:
        out.append(f"subapp {sa.name} on {sa.device}")
        out.extend(f"  instance {i.name} : {i.type_ref}" for i in sa.instances)
        out.append("end_subapp")
    out.extend(f"connect {c}" for c in desc.event_connections + desc.data_connections)
    for d in desc.diagnostic_points:
        out.append(f"dp {d.id} pathway {d.pathway} order {d.order} {d.role} on {d.location}")
    return "\n".join(out) + "\n"
