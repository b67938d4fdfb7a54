"""Discrete-event function-block runtime."""

from .app import ECC_BOUND, Instance, RuntimeApp, StepReport, instantiate
from .trace import TraceRecord, fb_level, write_trace_csv

__all__ = ["ECC_BOUND", "Instance", "RuntimeApp", "StepReport", "TraceRecord", "fb_level",
           "instantiate", "write_trace_csv"]
