"""Structural and type validation of a SystemDescriptor."""

from collections import Counter, defaultdict

from . import ast
from .descriptor import BASIC, DATA, EVENT, IN, MAINLINE, OUT, SERVICE, Diagnostic
from .typecheck import TypeProblem, check_statements, infer
from .values import BOOL


def type_env(fbtype):
    """Name -> value kind for every data port and internal variable."""
    env = {p.name: p.value_type for p in fbtype.interface if p.kind == DATA}
    env.update((v.name, v.value_type) for v in fbtype.internal_vars)
    return env


def writable_names(fbtype):
    names = {p.name for p in fbtype.interface if p.kind == DATA and p.direction == OUT}
    names.update(v.name for v in fbtype.internal_vars)
    return names


def _check_type(t, diags):
    def d(code, msg, pos=t.pos):
        diags.append(Diagnostic(code, f"{t.name}: {msg}", *pos))

    seen = Counter(p.name for p in t.interface)
    seen.update(v.name for v in t.internal_vars)
    for name, n in seen.items():
        if n > 1:
            d("DuplicateName", f"name {name!r} declared {n} times")
    for p in t.interface:
        if p.kind != EVENT:
            continue
        for w in p.with_assoc:
            q = t.port(w)
            if q is None or q.kind != DATA or q.direction != p.direction:
                side = "input" if p.direction == IN else "output"
                d("BadWith", f"event {p.name} WITH {w!r} is not an {side} data port", p.pos)

    if t.kind == SERVICE:
        if t.states or t.transitions:
            d("BadEcc", "service types have no ECC")
        if not t.builtin_binding:
            d("BadEcc", "service type without builtin binding")
        return
    if t.builtin_binding:
        d("BadEcc", "basic types take no builtin binding")
    if not t.states:
        d("BadEcc", "basic type has no ECC states")
        return

    env = type_env(t)
    writable = writable_names(t)
    alg_names = Counter(a.name for a in t.algorithms)
    for name, n in alg_names.items():
        if n > 1:
            d("DuplicateName", f"algorithm {name!r} declared {n} times")
    for a in t.algorithms:
        if a.body is None:
            continue
        unknown = sorted({n for s in a.body for n in ast.walk_names(s) if n not in env})
        for name in unknown:
            d("UnknownIdentifier", f"algorithm {a.name} references {name!r}", a.pos)
        if not unknown:
            for p in check_statements(a.body, env, writable):
                d("TypeMismatch", f"algorithm {a.name}: {p.message}", p.pos)

    state_names = Counter(s.name for s in t.states)
    for name, n in state_names.items():
        if n > 1:
            d("DuplicateName", f"state {name!r} declared {n} times")
    inputs = {p.name for p in t.ports(IN, EVENT)}
    outputs = {p.name for p in t.ports(OUT, EVENT)}
    for s in t.states:
        for act in s.actions:
            if act.algorithm and t.algorithm(act.algorithm) is None:
                d("BadEcc", f"state {s.name} runs unknown algorithm {act.algorithm!r}", s.pos)
            if act.output and act.output not in outputs:
                d("BadEcc", f"state {s.name} fires undeclared output event {act.output!r}", s.pos)
    for tr in t.transitions:
        for end in (tr.source, tr.target):
            if end not in state_names:
                d("BadEcc", f"transition references unknown state {end!r}", tr.pos)
        if tr.trigger is not None and tr.trigger not in inputs:
            d("BadEcc", f"transition {tr.source}->{tr.target} triggered by undeclared event "
                        f"{tr.trigger!r}", tr.pos)
        if tr.guard is not None:
            try:
                gt = infer(tr.guard, env)
                if gt != BOOL:
                    d("TypeMismatch", f"guard of {tr.source}->{tr.target} is {gt}, not BOOL", tr.pos)
            except TypeProblem as p:
                code = "UnknownIdentifier" if p.message.startswith("unknown") else "TypeMismatch"
                d(code, f"guard of {tr.source}->{tr.target}: {p.message}", tr.pos)


def validate(desc):
    """Return a list of Diagnostics; empty iff the descriptor is well-formed."""
    diags = []
    type_counts = Counter(t.name for t in desc.fb_types)
    for name, n in type_counts.items():
        if n > 1:
            diags.append(Diagnostic("DuplicateName", f"fbtype {name!r} declared {n} times"))
    for t in desc.fb_types:
        _check_type(t, diags)

    for name, n in Counter(desc.devices).items():
        if n > 1:
            diags.append(Diagnostic("DuplicateName", f"device {name!r} declared {n} times"))
    for name, n in Counter(sa.name for sa in desc.subapps).items():
        if n > 1:
            diags.append(Diagnostic("DuplicateName", f"subapp {name!r} declared {n} times"))
    inst_types = {}
    for inst, sa in desc.instances():
        if inst.name in inst_types:
            diags.append(Diagnostic("DuplicateName", f"instance {inst.name!r} declared twice",
                                    *inst.pos))
        if desc.fb_type(inst.type_ref) is None:
            diags.append(Diagnostic("UnknownType", f"instance {inst.name} has unknown type "
                                                   f"{inst.type_ref!r}", *inst.pos))
        inst_types[inst.name] = desc.fb_type(inst.type_ref)
    for sa in desc.subapps:
        if sa.device not in desc.devices:
            diags.append(Diagnostic("UnknownType", f"subapp {sa.name} placed on unknown device "
                                                   f"{sa.device!r}", *sa.pos))

    def endpoint(c, inst, port, direction):
        t = inst_types.get(inst)
        if t is None:
            if inst not in inst_types:
                diags.append(Diagnostic("DanglingConnection", f"{c}: no instance {inst!r}", *c.pos))
            return None
        p = t.port(port)
        if p is None:
            diags.append(Diagnostic("DanglingConnection", f"{c}: {inst} has no port {port!r}",
                                    *c.pos))
            return None
        if p.kind != c.kind or p.direction != direction:
            want = f"{c.kind} {'output' if direction == OUT else 'input'}"
            diags.append(Diagnostic("TypeMismatch", f"{c}: {inst}.{port} is not an {want}", *c.pos))
            return None
        return p

    seen_conn = set()
    drivers = defaultdict(list)
    for c in desc.connections:
        if c.key in seen_conn:
            diags.append(Diagnostic("DuplicateName", f"connection {c} declared twice", *c.pos))
        seen_conn.add(c.key)
        sp = endpoint(c, c.src, c.src_port, OUT)
        dp = endpoint(c, c.dst, c.dst_port, IN)
        if sp is not None and dp is not None and c.kind == DATA and sp.value_type != dp.value_type:
            diags.append(Diagnostic("TypeMismatch", f"{c}: {sp.value_type} output wired to "
                                                    f"{dp.value_type} input", *c.pos))
        if c.kind == DATA:
            drivers[(c.dst, c.dst_port)].append(c)
    for (inst, port), conns in drivers.items():
        if len(conns) > 1:
            diags.append(Diagnostic("MultipleDrivers", f"{inst}.{port} has {len(conns)} incoming "
                                                       f"data connections", *conns[1].pos))

    ids = Counter(d.id for d in desc.diagnostic_points)
    for dp_id, n in ids.items():
        if n > 1:
            diags.append(Diagnostic("DuplicateName", f"diagnostic point {dp_id} declared {n} times"))
    by_pathway = defaultdict(list)
    for d in desc.diagnostic_points:
        if d.location.key not in seen_conn:
            diags.append(Diagnostic("BadDp", f"dp {d.id}: no connection {d.location}", *d.pos))
        by_pathway[d.pathway].append(d)
    for pathway, dps in by_pathway.items():
        for order, n in Counter(d.order for d in dps).items():
            if n > 1:
                diags.append(Diagnostic("BadDp", f"pathway {pathway}: order index {order} used "
                                                 f"{n} times"))
        if not any(d.role == MAINLINE for d in dps):
            diags.append(Diagnostic("BadDp", f"pathway {pathway} has no mainline point"))
    return diags
