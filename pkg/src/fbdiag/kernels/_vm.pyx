# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled bytecode interpreter for algorithm and guard code."""

from libc.math cimport fmod

from fbdiag.errors import DivisionByZero

ctypedef unsigned long long u64


def exec_code(const long long[:] code, tuple consts, list slots):
    cdef Py_ssize_t pc = 0
    cdef Py_ssize_t n = code.shape[0]
    cdef long long op, arg, ia, ib, q
    cdef double da, db
    cdef list stack = []
    cdef object a, b, v
    while pc < n:
        op = code[pc]
        arg = code[pc + 1]
        pc += 2
        if op == 2:
            stack.append(slots[arg])
        elif op == 1:
            stack.append(consts[arg])
        elif op == 3:
            slots[arg] = stack.pop()
        elif op == 26:
            if not stack.pop():
                pc = arg
        elif op == 25:
            pc = arg
        elif op == 0:
            break
        elif op == 4:
            ia = stack.pop()
            stack.append(<long long>(0ULL - <u64>ia))
        elif op == 5:
            da = stack.pop()
            stack.append(-da)
        elif op == 6:
            stack.append(not stack.pop())
        elif op <= 11:
            ib = stack.pop()
            ia = stack.pop()
            if op == 7:
                stack.append(<long long>(<u64>ia + <u64>ib))
            elif op == 8:
                stack.append(<long long>(<u64>ia - <u64>ib))
            elif op == 9:
                stack.append(<long long>(<u64>ia * <u64>ib))
            elif op == 10:
                if ib == 0:
                    raise DivisionByZero("integer division by zero")
                if ib == -1:
                    stack.append(<long long>(0ULL - <u64>ia))
                else:
                    stack.append(ia / ib)
            else:
                if ib == 0:
                    raise DivisionByZero("integer modulo by zero")
                if ib == -1:
                    stack.append(0)
                else:
                    stack.append(ia % ib)
        elif op <= 16:
            db = stack.pop()
            da = stack.pop()
            if op == 12:
                stack.append(da + db)
            elif op == 13:
                stack.append(da - db)
            elif op == 14:
                stack.append(da * db)
            elif op == 15:
                if db == 0.0:
                    raise DivisionByZero("REAL division by zero")
                stack.append(da / db)
            else:
                if db == 0.0:
                    raise DivisionByZero("REAL modulo by zero")
                stack.append(fmod(da, db))
        elif op <= 24:
            b = stack.pop()
            a = stack.pop()
            if op == 17:
                stack.append(a < b)
            elif op == 18:
                stack.append(a <= b)
            elif op == 19:
                stack.append(a > b)
            elif op == 20:
                stack.append(a >= b)
            elif op == 21:
                stack.append(a == b)
            elif op == 22:
                stack.append(a != b)
            elif op == 23:
                stack.append(a is True and b is True)
            else:
                stack.append(a is True or b is True)
        elif op == 27:
            v = stack.pop()
            stack.append(float(v))
        else:
            b = stack.pop()
            a = stack.pop()
            v = stack.pop()
            stack.append(a if v else b)
    if stack:
        return stack[len(stack) - 1]
    return None
