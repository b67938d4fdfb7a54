"""Tree-walking evaluation of expressions and statements.

Evaluation is strict: every operand is evaluated, left to right, including
both sides of AND/OR and all three arguments of SEL.
"""

import math

from ..errors import DivisionByZero, ValueTypeError
from . import ast
from .values import wrap_int


def _num(v):
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def _is_int(v):
    return type(v) is int


def int_div(a, b):
    if b == 0:
        raise DivisionByZero("integer division by zero")
    q = abs(a) // abs(b)
    return wrap_int(q if (a < 0) == (b < 0) else -q)


def int_mod(a, b):
    if b == 0:
        raise DivisionByZero("integer modulo by zero")
    r = abs(a) % abs(b)
    return -r if a < 0 else r


def arith(op, a, b):
    if not (_num(a) and _num(b)):
        raise ValueTypeError(f"{op} on {a!r}, {b!r}")
    if _is_int(a) and _is_int(b):
        if op == "+":
            return wrap_int(a + b)
        if op == "-":
            return wrap_int(a - b)
        if op == "*":
            return wrap_int(a * b)
        if op == "/":
            return int_div(a, b)
        return int_mod(a, b)
    a = float(a)
    b = float(b)
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if b == 0.0:
        raise DivisionByZero("REAL division by zero")
    if op == "/":
        return a / b
    return math.fmod(a, b)


def compare(op, a, b):
    if _num(a) != _num(b) or (not _num(a) and type(a) is not type(b)):
        raise ValueTypeError(f"cannot compare {a!r} with {b!r}")
    if op == "=":
        return a == b
    if op == "<>":
        return a != b
    if isinstance(a, bool):
        raise ValueTypeError("ordering on BOOL")
    if op == "<":
        return a < b
    if op == "<=":
        return a <= b
    if op == ">":
        return a > b
    return a >= b


def eval_expression(expr, env):
    """Evaluate ``expr`` against ``env`` (a name -> value mapping)."""
    if isinstance(expr, ast.Lit):
        return expr.value
    if isinstance(expr, ast.Var):
        return env[expr.name]
    if isinstance(expr, ast.Unary):
        v = eval_expression(expr.operand, env)
        if expr.op == "NOT":
            if not isinstance(v, bool):
                raise ValueTypeError(f"NOT on {v!r}")
            return not v
        if not _num(v):
            raise ValueTypeError(f"negation of {v!r}")
        return wrap_int(-v) if _is_int(v) else -v
    if isinstance(expr, ast.Binary):
        a = eval_expression(expr.left, env)
        b = eval_expression(expr.right, env)
        op = expr.op
        if op in ast.ARITH_OPS:
            return arith(op, a, b)
        if op in ast.LOGIC_OPS:
            if not (isinstance(a, bool) and isinstance(b, bool)):
                raise ValueTypeError(f"{op} on {a!r}, {b!r}")
            return (a and b) if op == "AND" else (a or b)
        return compare(op, a, b)
    if isinstance(expr, ast.Cond):
        g = eval_expression(expr.test, env)
        then = eval_expression(expr.then, env)
        orelse = eval_expression(expr.orelse, env)
        if not isinstance(g, bool):
            raise ValueTypeError(f"SEL selector {g!r}")
        r = then if g else orelse
        # mixed numeric branches are typed REAL
        if _num(then) and _num(orelse) and type(then) is not type(orelse):
            r = float(r)
        return r
    raise TypeError(f"not an expression: {expr!r}")


def exec_statements(stmts, env, types=None):
    """Execute statements, mutating ``env``. ``types`` enables INT->REAL
    promotion on assignment."""
    for s in stmts:
        if isinstance(s, ast.Assign):
            v = eval_expression(s.expr, env)
            if types is not None and types.get(s.target) == "REAL" and type(v) is int:
                v = float(v)
            env[s.target] = v
        else:
            g = eval_expression(s.test, env)
            if not isinstance(g, bool):
                raise ValueTypeError(f"IF condition {g!r}")
            exec_statements(s.body if g else s.orelse, env, types)
    return env
