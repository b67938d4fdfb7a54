"""Static typing of algorithm expressions and statements."""

from . import ast
from .values import BOOL, INT, NUMERIC, REAL, STRING, kind_of


class TypeProblem(Exception):
    def __init__(self, message, pos=(0, 0)):
        super().__init__(message)
        self.message = message
        self.pos = pos


def infer(expr, types):
    """Return the value kind of ``expr`` given ``types`` (name -> kind)."""
    if isinstance(expr, ast.Lit):
        return kind_of(expr.value)
    if isinstance(expr, ast.Var):
        try:
            return types[expr.name]
        except KeyError:
            raise TypeProblem(f"unknown identifier {expr.name!r}", expr.pos) from None
    if isinstance(expr, ast.Unary):
        t = infer(expr.operand, types)
        if expr.op == "NOT":
            if t != BOOL:
                raise TypeProblem(f"NOT needs BOOL, got {t}", expr.pos)
            return BOOL
        if t not in NUMERIC:
            raise TypeProblem(f"unary - needs a number, got {t}", expr.pos)
        return t
    if isinstance(expr, ast.Binary):
        lt = infer(expr.left, types)
        rt = infer(expr.right, types)
        op = expr.op
        if op in ast.ARITH_OPS:
            if lt not in NUMERIC or rt not in NUMERIC:
                raise TypeProblem(f"{op} needs numbers, got {lt} and {rt}", expr.pos)
            return INT if lt == rt == INT else REAL
        if op in ast.LOGIC_OPS:
            if lt != BOOL or rt != BOOL:
                raise TypeProblem(f"{op} needs BOOL operands, got {lt} and {rt}", expr.pos)
            return BOOL
        # comparison
        if lt in NUMERIC and rt in NUMERIC:
            return BOOL
        if lt != rt:
            raise TypeProblem(f"cannot compare {lt} with {rt}", expr.pos)
        if lt == BOOL and op not in ("=", "<>"):
            raise TypeProblem(f"BOOL values only support = and <>", expr.pos)
        return BOOL
    if isinstance(expr, ast.Cond):
        if infer(expr.test, types) != BOOL:
            raise TypeProblem("SEL selector must be BOOL", expr.pos)
        a = infer(expr.then, types)
        b = infer(expr.orelse, types)
        if a == b:
            return a
        if a in NUMERIC and b in NUMERIC:
            return REAL
        raise TypeProblem(f"SEL branches disagree: {b} vs {a}", expr.pos)
    raise TypeError(f"not an expression: {expr!r}")


def assignable(target_kind, value_kind):
    return target_kind == value_kind or (target_kind == REAL and value_kind == INT)


def check_statements(stmts, types, writable):
    """Collect type problems for a statement list.

    ``writable`` is the set of names an algorithm may assign.
    """
    problems = []
    for s in stmts:
        try:
            if isinstance(s, ast.Assign):
                if s.target not in types:
                    raise TypeProblem(f"unknown identifier {s.target!r}", s.pos)
                if s.target not in writable:
                    raise TypeProblem(f"{s.target!r} is read-only", s.pos)
                vt = infer(s.expr, types)
                if not assignable(types[s.target], vt):
                    raise TypeProblem(
                        f"cannot assign {vt} to {s.target!r} of type {types[s.target]}", s.pos)
            else:
                if infer(s.test, types) != BOOL:
                    raise TypeProblem("IF condition must be BOOL", s.pos)
        except TypeProblem as p:
            problems.append(p)
        if isinstance(s, ast.If):
            problems.extend(check_statements(s.body, types, writable))
            problems.extend(check_statements(s.orelse, types, writable))
    return problems


__all__ = ["TypeProblem", "infer", "assignable", "check_statements", "BOOL", "INT", "REAL", "STRING"]
