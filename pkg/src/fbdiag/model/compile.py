"""Compile typed algorithm trees to flat bytecode for the kernels."""

from dataclasses import dataclass
from typing import Any, List, Tuple

from .. import kernels
from ..kernels import opcodes as O
from . import ast
from .typecheck import infer
from .values import INT, REAL

_ARITH = {
    ("+", INT): O.ADD_I, ("-", INT): O.SUB_I, ("*", INT): O.MUL_I,
    ("/", INT): O.DIV_I, ("%", INT): O.MOD_I,
    ("+", REAL): O.ADD_R, ("-", REAL): O.SUB_R, ("*", REAL): O.MUL_R,
    ("/", REAL): O.DIV_R, ("%", REAL): O.MOD_R,
}
_CMP = {"<": O.LT, "<=": O.LE, ">": O.GT, ">=": O.GE, "=": O.EQ, "<>": O.NE}


@dataclass
class Code:
    ops: List[int]
    consts: Tuple[Any, ...]
    buf: Any = None

    def run(self, slots):
        return kernels.exec_code(self.buf, self.consts, slots)


class _Compiler:
    def __init__(self, slot_of, types):
        self.slot_of = slot_of
        self.types = types
        self.ops = []
        self.consts = []
        self._const_index = {}

    def emit(self, op, arg=0):
        self.ops.extend((op, arg))
        return len(self.ops) - 1  # index of the argument, for patching

    def const(self, value):
        key = (type(value), value)
        if key not in self._const_index:
            self._const_index[key] = len(self.consts)
            self.consts.append(value)
        return self._const_index[key]

    def expr(self, e, want=None):
        t = infer(e, self.types)
        if isinstance(e, ast.Lit):
            v = e.value
            if want == REAL and t == INT:
                v = float(v)
                t = REAL
            self.emit(O.CONST, self.const(v))
            return t
        if isinstance(e, ast.Var):
            self.emit(O.LOAD, self.slot_of[e.name])
        elif isinstance(e, ast.Unary):
            if e.op == "NOT":
                self.expr(e.operand)
                self.emit(O.NOT)
            else:
                self.expr(e.operand)
                self.emit(O.NEG_I if t == INT else O.NEG_R)
        elif isinstance(e, ast.Binary):
            if e.op in ast.ARITH_OPS:
                self.expr(e.left, t)
                self.expr(e.right, t)
                self.emit(_ARITH[(e.op, t)])
            elif e.op in ast.LOGIC_OPS:
                self.expr(e.left)
                self.expr(e.right)
                self.emit(O.AND if e.op == "AND" else O.OR)
            else:
                self.expr(e.left)
                self.expr(e.right)
                self.emit(_CMP[e.op])
        elif isinstance(e, ast.Cond):
            self.expr(e.test)
            self.expr(e.then, t)
            self.expr(e.orelse, t)
            self.emit(O.SEL)
        else:
            raise TypeError(f"not an expression: {e!r}")
        if want == REAL and t == INT:
            self.emit(O.TO_REAL)
            t = REAL
        return t

    def stmts(self, stmts):
        for s in stmts:
            if isinstance(s, ast.Assign):
                self.expr(s.expr, self.types[s.target])
                self.emit(O.STORE, self.slot_of[s.target])
            else:
                self.expr(s.test)
                jf = self.emit(O.JMPF)
                self.stmts(s.body)
                if s.orelse:
                    j = self.emit(O.JMP)
                    self.ops[jf] = len(self.ops)
                    self.stmts(s.orelse)
                    self.ops[j] = len(self.ops)
                else:
                    self.ops[jf] = len(self.ops)

    def finish(self):
        return Code(self.ops, tuple(self.consts), kernels.prepare(self.ops))


def compile_expression(expr, slot_of, types):
    c = _Compiler(slot_of, types)
    c.expr(expr)
    return c.finish()


def compile_statements(stmts, slot_of, types):
    c = _Compiler(slot_of, types)
    c.stmts(stmts)
    return c.finish()
