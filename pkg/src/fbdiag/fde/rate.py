"""Expected-rate detector: Normal vs Degraded conditioning response."""

import math
from dataclasses import dataclass

from ..errors import InsufficientSamples


@dataclass(frozen=True)
class RateModel:
    expected_rate_c_per_min: float = 0.3
    sigma_healthy: float = 0.1
    sigma_degraded: float = 0.1
    intervention_threshold: float = 0.95
    prior_degraded: float = 0.5
    window_ms: int = 300_000
    deadband_c: float = 0.5

    def __post_init__(self):
        if not (self.sigma_healthy > 0 and self.sigma_degraded > 0):
            raise ValueError("rate model sigmas must be positive")
        if not 0.5 < self.intervention_threshold < 1:
            raise ValueError("intervention threshold must lie in (0.5, 1)")
        if not 0 < self.prior_degraded < 1:
            raise ValueError("prior_degraded must lie in (0, 1)")

    @classmethod
    def from_dict(cls, d):
        return cls(**(d or {}))

    def p_degraded(self, rate):
        """Posterior of Degraded given an oriented rate (degC/min)."""
        def loglik(x, mu, s):
            return -0.5 * ((x - mu) / s) ** 2 - math.log(s)
        lh = loglik(rate, self.expected_rate_c_per_min, self.sigma_healthy)
        ld = loglik(rate, 0.0, self.sigma_degraded)
        a = math.log(1 - self.prior_degraded) + lh
        b = math.log(self.prior_degraded) + ld
        m = max(a, b)
        return math.exp(b - m) / (math.exp(a - m) + math.exp(b - m))


@dataclass(frozen=True)
class RateDecision:
    rate_c_per_min: float
    slope_c_per_min: float
    p_degraded: float
    intervene: bool
    samples: int


def ls_slope(samples):
    """Least-squares slope of (t_ms, temp_c) samples in degC/min."""
    n = len(samples)
    if n < 2:
        raise InsufficientSamples(f"need at least 2 samples, have {n}")
    mt = math.fsum(t for t, _ in samples) / n
    my = math.fsum(y for _, y in samples) / n
    sxx = math.fsum((t - mt) ** 2 for t, _ in samples)
    if sxx == 0:
        raise InsufficientSamples("samples share a single timestamp")
    sxy = math.fsum((t - mt) * (y - my) for t, y in samples)
    return sxy / sxx * 60000.0


def rate_monitor(model, samples, change_t_ms, direction):
    """Decide on intervention from samples following a setpoint change.

    ``direction`` is +1 when heating was demanded and -1 for cooling.
    Only samples inside ``[change, change + window]`` count, and the window
    must be fully covered.
    """
    end = change_t_ms + model.window_ms
    window = [(t, y) for t, y in samples if change_t_ms <= t <= end]
    if not window or window[-1][0] < end:
        have = (window[-1][0] - change_t_ms) if window else 0
        raise InsufficientSamples(f"window covers {have} ms of {model.window_ms} ms")
    slope = ls_slope(window)
    rate = direction * slope
    p = model.p_degraded(rate)
    return RateDecision(rate, slope, p, p > model.intervention_threshold, len(window))
