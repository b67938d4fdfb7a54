"""Fault Diagnostic Engine: gates, detectors, plans, beliefs and agents."""

from .agent import Agent, BackChannelMessage, DiagnosisReport, diagnose, monitor_step
from .backchannel import exchange_beliefs
from .belief import HYPOTHESES, Belief, segment_row
from .config import FdeConfig
from .engine import Fde
from .gate import (
    CLOSED, INJECT, MONITOR, AgentGate, Instrumentation, Packet, gate_close, gate_open, inject,
    rewire, unwire,
)
from .monitor import Anomaly
from .pathway import FaultPathway, Segment, build_pathways, f_to_c
from .plans import DiagnosticPlan, Verdict, align, compare, default_plans, evaluate_plan
from .rate import RateDecision, RateModel, ls_slope, rate_monitor

__all__ = [
    "CLOSED", "HYPOTHESES", "INJECT", "MONITOR", "Agent", "AgentGate", "Anomaly",
    "BackChannelMessage", "Belief", "DiagnosisReport", "DiagnosticPlan", "FaultPathway", "Fde",
    "FdeConfig", "Instrumentation", "Packet", "RateDecision", "RateModel", "Segment", "Verdict",
    "align", "build_pathways", "compare", "default_plans", "diagnose", "evaluate_plan",
    "exchange_beliefs", "f_to_c", "gate_close", "gate_open", "inject", "ls_slope",
    "monitor_step", "rate_monitor", "rewire", "segment_row", "unwire",
]
