"""Authored diagnostic plans and the compare() verdict logic."""

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from ..errors import PlanMissing, UnknownDp
from ..model.descriptor import EVENT
from .gate import K_INJECTED
from .pathway import f_to_c

DEFAULT_SPACING_MS = 300
DEFAULT_TOL_C = 0.1
PRIME_F = 68.0
# °F stimuli for a conversion segment: identity points, the boiling point, a
# 3 °F sweep across room temperatures and absolute zero
CONVERSION_STIMULI_F = (32.0, 50.0, 212.0, 59.0, 62.0, 65.0, 68.0, 71.0, 74.0, 77.0, 80.0,
                        -459.67)
VALID_RANGE_C = (-50.0, 100.0)
CONTROLLER_STIMULI_C = (0.0, 10.0, 20.0, 35.5, -10.0)


@dataclass(frozen=True)
class Injection:
    dp: int
    values: Tuple
    spacing_ms: int = DEFAULT_SPACING_MS


@dataclass(frozen=True)
class ExpectItem:
    expected: object  # number, event name, or None for silence
    tol: float = DEFAULT_TOL_C
    timeout_ms: int = DEFAULT_SPACING_MS


@dataclass(frozen=True)
class Expectation:
    dp: int
    port: str
    items: Tuple[ExpectItem, ...]
    event: bool = False


@dataclass(frozen=True)
class DiagnosticPlan:
    plan_id: str
    pathway: str
    component: str
    segment: Tuple[int, int]
    ring_fence: Tuple[int, ...]
    injection: Injection
    expectations: Tuple[Expectation, ...]
    prime: int = 0

    def to_dict(self):
        return {
            "plan_id": self.plan_id, "pathway": self.pathway, "component": self.component,
            "segment": list(self.segment), "ring_fence": list(self.ring_fence),
            "injection": {"dp": self.injection.dp, "values": list(self.injection.values),
                          "spacing_ms": self.injection.spacing_ms},
            "expectations": [{"dp": e.dp, "port": e.port, "event": e.event,
                              "items": [[i.expected, i.tol, i.timeout_ms] for i in e.items]}
                             for e in self.expectations],
            "prime": self.prime,
        }

    @classmethod
    def from_dict(cls, d):
        inj = d["injection"]
        exps = tuple(
            Expectation(e["dp"], e["port"],
                        tuple(ExpectItem(*item) for item in e["items"]), e.get("event", False))
            for e in d["expectations"])
        return cls(d["plan_id"], d["pathway"], d["component"], tuple(d["segment"]),
                   tuple(d["ring_fence"]),
                   Injection(inj["dp"], tuple(inj["values"]),
                             inj.get("spacing_ms", DEFAULT_SPACING_MS)),
                   exps, d.get("prime", 0))


def check_plan(plan, desc):
    """Every DP named by the plan exists and expectations lie within the fence."""
    order = {}
    for dp in {plan.injection.dp, *plan.ring_fence, *(e.dp for e in plan.expectations)}:
        decl = desc.dp(dp)
        if decl is None:
            raise UnknownDp(f"plan {plan.plan_id}: unknown DP {dp}")
        order[dp] = decl.order
    lo = min(order[d] for d in plan.ring_fence)
    hi = max(order[d] for d in plan.ring_fence)
    for e in plan.expectations:
        if not lo <= order[e.dp] <= hi:
            raise ValueError(f"plan {plan.plan_id}: DP{e.dp} lies outside the ring fence")
    n = len(plan.injection.values)
    for e in plan.expectations:
        if len(e.items) != n:
            raise ValueError(f"plan {plan.plan_id}: DP{e.dp} expects {len(e.items)} items, "
                             f"injection has {n}")
    return plan


def _data_port(desc, dp_id):
    """Observed data port at a DP: the connection's port, or the first WITH of an event DP."""
    loc = desc.dp(dp_id).location
    if loc.kind != EVENT:
        return loc.src_port
    port = desc.instance_type(loc.src).port(loc.src_port)
    return port.with_assoc[0] if port.with_assoc else None


def default_plans(pathway, desc, spacing_ms=DEFAULT_SPACING_MS, tol=DEFAULT_TOL_C):
    """One plan per mainline segment, in mainline order."""
    plans = []
    fence = list(pathway.boundary)
    for seg in pathway.segments:
        if seg.src_dp not in fence:
            fence.append(seg.src_dp)
        port = _data_port(desc, seg.dst_dp)
        if seg.transform == "f_to_c":
            values = (PRIME_F,) + CONVERSION_STIMULI_F
            prime = 1
        else:
            values = CONTROLLER_STIMULI_C
            prime = 0
        items = []
        errors = []
        lo, hi = VALID_RANGE_C
        for v in values:
            out = seg.apply(v)
            valid = lo <= out <= hi
            items.append(ExpectItem(out if valid else None, tol, spacing_ms))
            errors.append(ExpectItem(None if valid else "ERROR", tol, spacing_ms))
        exps = [Expectation(seg.dst_dp, port, tuple(items))]
        if seg.error_dp is not None:
            err_port = desc.dp(seg.error_dp).location.src_port
            exps.append(Expectation(seg.error_dp, err_port, tuple(errors), event=True))
        plans.append(check_plan(DiagnosticPlan(
            f"{pathway.pathway_id}:{seg.src_dp}-{seg.dst_dp}", pathway.pathway_id,
            seg.component, (seg.src_dp, seg.dst_dp), tuple(sorted(fence)),
            Injection(seg.src_dp, values, spacing_ms), tuple(exps), prime), desc))
    if not plans:
        raise PlanMissing(f"pathway {pathway.pathway_id} has no segments")
    return plans


# verdicts

MATCH = "Match"
MISMATCH = "Mismatch"


@dataclass
class Verdict:
    verdict: str
    residuals: List[Optional[float]] = field(default_factory=list)
    first_fail: Optional[int] = None  # 1-based item index
    reason: str = ""

    @property
    def match(self):
        return self.verdict == MATCH

    def to_dict(self):
        return {"verdict": self.verdict, "residuals": self.residuals,
                "first_fail": self.first_fail, "reason": self.reason}


def _is_number(x):
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def compare(expected, observed, tolerance_abs):
    """Item-wise comparison of aligned expected and observed sequences.

    ``expected`` items are numbers, event names, or None (nothing may be
    observed); ``observed`` holds the aligned observation or None on timeout.
    ``tolerance_abs`` is a scalar or one tolerance per item.
    """
    if len(expected) != len(observed):
        raise ValueError("expected and observed sequences differ in length")
    tols = tolerance_abs if isinstance(tolerance_abs, (list, tuple)) else \
        [tolerance_abs] * len(expected)
    residuals = []
    first = None
    reason = ""
    for i, (e, o, tol) in enumerate(zip(expected, observed, tols), 1):
        ok = True
        res = None
        if e is None:
            ok = o is None
            why = f"unexpected {o!r}"
        elif _is_number(e):
            if _is_number(o) and math.isfinite(o):
                res = o - e
                ok = abs(res) <= tol
                why = f"expected {e:g}, observed {o:g}"
            else:
                ok = False
                why = "timeout" if o is None else f"expected {e:g}, observed {o!r}"
        else:
            ok = o == e
            why = "timeout" if o is None else f"expected {e!r}, observed {o!r}"
        residuals.append(res)
        if not ok and first is None:
            first = i
            reason = why
    return Verdict(MATCH if first is None else MISMATCH, residuals, first, reason)


def align(receipt, packets, dp, port, timeout_ms, event=False):
    """Per injected item, the last observation at ``dp`` inside the item's window."""
    obs = []
    for item in receipt.items:
        lo = item.start_ms
        hi = item.start_ms + timeout_ms
        seen = None
        for p in packets:
            if p.dp != dp or p.port != port or p.kind == K_INJECTED or p.event != event:
                continue
            if lo <= p.t < hi:
                seen = p.value
        obs.append(seen)
    return obs


def evaluate_plan(plan, receipt, packets):
    """Combine per-DP comparisons into one segment verdict."""
    combined = None
    details = []
    for exp in plan.expectations:
        timeout = max(i.timeout_ms for i in exp.items)
        observed = align(receipt, packets, exp.dp, exp.port, timeout, exp.event)
        keep = slice(plan.prime, None)
        v = compare([i.expected for i in exp.items][keep], observed[keep],
                    [i.tol for i in exp.items][keep])
        if v.first_fail is not None:
            v.first_fail += plan.prime
        details.append({"dp": exp.dp, "port": exp.port, **v.to_dict()})
        if combined is None:
            combined = Verdict(v.verdict, v.residuals, v.first_fail, v.reason)
        elif not v.match and (combined.match or v.first_fail < combined.first_fail):
            combined = Verdict(MISMATCH, combined.residuals, v.first_fail,
                               f"DP{exp.dp}: {v.reason}")
    if combined is not None and not combined.match and not combined.reason.startswith("DP"):
        combined.reason = f"DP{plan.expectations[0].dp}: {combined.reason}"
    return combined, details
