"""Pure-Python bytecode interpreter; semantics identical to the Cython core."""

import math

from ..errors import DivisionByZero

_MASK = 0xFFFFFFFFFFFFFFFF
_SIGN = 1 << 63


def _wrap(v):
    v &= _MASK
    return v - (1 << 64) if v & _SIGN else v


def exec_code(code, consts, slots):
    """Run ``code`` over the variable store ``slots``.

    Returns the value left on top of the stack (guards), or None.
    """
    stack = []
    push = stack.append
    pop = stack.pop
    pc = 0
    n = len(code)
    while pc < n:
        op = code[pc]
        arg = code[pc + 1]
        pc += 2
        if op == 2:  # LOAD
            push(slots[arg])
        elif op == 1:  # CONST
            push(consts[arg])
        elif op == 3:  # STORE
            slots[arg] = pop()
        elif op == 26:  # JMPF
            if not pop():
                pc = arg
        elif op == 25:  # JMP
            pc = arg
        elif op <= 6:
            if op == 0:
                break
            v = pop()
            if op == 4:
                push(_wrap(-v))
            elif op == 5:
                push(-v)
            else:
                push(not v)
        elif op <= 16:
            b = pop()
            a = pop()
            if op == 7:
                push(_wrap(a + b))
            elif op == 8:
                push(_wrap(a - b))
            elif op == 9:
                push(_wrap(a * b))
            elif op == 10:
                if b == 0:
                    raise DivisionByZero("integer division by zero")
                q = abs(a) // abs(b)
                push(_wrap(q if (a < 0) == (b < 0) else -q))
            elif op == 11:
                if b == 0:
                    raise DivisionByZero("integer modulo by zero")
                r = abs(a) % abs(b)
                push(-r if a < 0 else r)
            elif op == 12:
                push(a + b)
            elif op == 13:
                push(a - b)
            elif op == 14:
                push(a * b)
            elif op == 15:
                if b == 0.0:
                    raise DivisionByZero("REAL division by zero")
                push(a / b)
            else:
                if b == 0.0:
                    raise DivisionByZero("REAL modulo by zero")
                push(math.fmod(a, b))
        elif op <= 24:
            b = pop()
            a = pop()
            if op == 17:
                push(a < b)
            elif op == 18:
                push(a <= b)
            elif op == 19:
                push(a > b)
            elif op == 20:
                push(a >= b)
            elif op == 21:
                push(a == b)
            elif op == 22:
                push(a != b)
            elif op == 23:
                push(a and b)
            else:
                push(a or b)
        elif op == 27:  # TO_REAL
            stack[-1] = float(stack[-1])
        else:  # SEL
            orelse = pop()
            then = pop()
            push(then if pop() else orelse)
    return stack[-1] if stack else None
