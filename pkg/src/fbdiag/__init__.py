"""fbdiag: function-block runtime, HVAC co-simulation and fault diagnostic engine."""

__version__ = "0.1.0"
