"""Newline-delimited JSON records for telemetry, commands and reports."""

import json

from .gate import Packet

PACKET_KINDS = ("event", "data", "injected", "suppressed")
COMMANDS = ("rewire", "gate_close", "gate_open", "inject", "unwire")


def dumps(obj):
    return json.dumps(obj, separators=(",", ":"), sort_keys=False, allow_nan=False)


def encode_packet(p):
    return dumps(p.to_dict())


def decode_packet(line):
    d = json.loads(line)
    missing = {"gate", "dp", "seq", "t", "kind", "port", "value"} - set(d)
    if missing:
        raise ValueError(f"telemetry record missing {sorted(missing)}")
    if d["kind"] not in PACKET_KINDS:
        raise ValueError(f"unknown packet kind {d['kind']!r}")
    for key in ("gate", "dp", "seq", "t"):
        if type(d[key]) is not int:
            raise ValueError(f"{key} must be an integer")
    return Packet(d["gate"], d["dp"], d["seq"], d["t"], d["kind"], d["port"], d["value"], -1)


def write_packets(packets, fh):
    for p in packets:
        fh.write(encode_packet(p))
        fh.write("\n")


def read_packets(fh):
    return [decode_packet(line) for line in fh if line.strip()]


def encode_command(cmd, **args):
    if cmd not in COMMANDS:
        raise ValueError(f"unknown command {cmd!r}")
    return dumps({"cmd": cmd, **args})


def decode_command(line):
    d = json.loads(line)
    cmd = d.pop("cmd", None)
    if cmd not in COMMANDS:
        raise ValueError(f"unknown command {cmd!r}")
    return cmd, d


def apply_command(instrumentation, line):
    """Execute one command record against an in-process Instrumentation."""
    from . import gate as g

    cmd, args = decode_command(line)
    if cmd == "rewire":
        g.rewire(instrumentation.app, args["dps"], instrumentation)
        return {"ok": True, "gates": sorted(instrumentation.by_dp[d].gate_id for d in args["dps"])}
    if cmd == "unwire":
        g.unwire(instrumentation, args.get("dps"))
        return {"ok": True}
    if cmd == "gate_close":
        return {"ok": True, "gates": g.gate_close(instrumentation, args["gates"])}
    if cmd == "gate_open":
        return {"ok": True, "gates": g.gate_open(instrumentation, args["gates"])}
    receipt = instrumentation.gate(args["gate"]).inject(
        args["values"], args["spacing_ms"], args.get("start_ms"), args.get("repeat_ms"))
    return {"ok": True, "start_ms": receipt.start_ms, "end_ms": receipt.end_ms,
            "items": len(receipt.items)}
