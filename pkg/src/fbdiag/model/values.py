"""Value kinds of the function-block data model.

Values are plain Python objects: ``bool`` for BOOL, ``int`` for INT (wrapped to
64-bit two's complement), ``float`` for REAL and ``str`` for STRING.
"""

import math

BOOL = "BOOL"
INT = "INT"
REAL = "REAL"
STRING = "STRING"

KINDS = (BOOL, INT, REAL, STRING)
NUMERIC = (INT, REAL)

_DEFAULTS = {BOOL: False, INT: 0, REAL: 0.0, STRING: ""}

INT_MIN = -(1 << 63)
INT_MAX = (1 << 63) - 1


def default_value(kind):
    return _DEFAULTS[kind]


def wrap_int(v):
    """Wrap an unbounded Python int into the signed 64-bit range."""
    v &= 0xFFFFFFFFFFFFFFFF
    return v - (1 << 64) if v > INT_MAX else v


def kind_of(value):
    # bool before int: bool is an int subclass
    if isinstance(value, bool):
        return BOOL
    if isinstance(value, int):
        return INT
    if isinstance(value, float):
        return REAL
    if isinstance(value, str):
        return STRING
    raise TypeError(f"not a function-block value: {value!r}")


def coerce(value, kind):
    """Convert ``value`` to ``kind`` where the model allows it (INT -> REAL only)."""
    actual = kind_of(value)
    if actual == kind:
        return value
    if actual == INT and kind == REAL:
        return float(value)
    raise TypeError(f"cannot store {actual} value {value!r} in a {kind} slot")


def check_finite(value):
    if isinstance(value, float) and not math.isfinite(value):
        raise ValueError(f"non-finite REAL {value!r}")
    return value


def format_literal(value):
    """Source text for a literal; parsing it back yields an equal value."""
    kind = kind_of(value)
    if kind == BOOL:
        return "TRUE" if value else "FALSE"
    if kind == INT:
        return str(value)
    if kind == REAL:
        text = repr(value)
        if "e" not in text and "." not in text:
            text += ".0"
        return text
    return "'" + value.replace("$", "$$").replace("'", "$'") + "'"


def format_sig(value, digits=9):
    """Render a value for CSV export; REAL uses ``digits`` significant digits."""
    kind = kind_of(value)
    if kind == REAL:
        return f"{value:.{digits}g}"
    if kind == BOOL:
        return "TRUE" if value else "FALSE"
    return str(value)
