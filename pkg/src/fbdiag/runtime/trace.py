"""Trace records and CSV export."""

import csv
from typing import Any, NamedTuple

from ..model.values import format_sig

EVENT_FIRED = "EventFired"
DATA_WRITTEN = "DataWritten"
STATE_ENTERED = "StateEntered"

CSV_COLUMNS = ("time_ms", "kind", "instance", "port", "value")


class TraceRecord(NamedTuple):
    time: int
    seq: int
    kind: str
    instance: str
    port: str
    value: Any = None


def trace_rows(records):
    for r in records:
        value = "" if r.value is None else format_sig(r.value)
        yield (r.time, r.kind, r.instance, r.port, value)


def write_trace_csv(records, fh, header=True):
    w = csv.writer(fh, lineterminator="\n")
    if header:
        w.writerow(CSV_COLUMNS)
    w.writerows(trace_rows(records))


def fb_level(records):
    """Project records onto the fields compared by transparency checks."""
    return [(r.time, r.kind, r.instance, r.port, r.value) for r in records]
