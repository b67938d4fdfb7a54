"""Opcode numbers shared by the compiler and both VM backends.

Code is a flat sequence of (opcode, argument) pairs; opcodes without an
argument carry 0.
"""

HALT = 0
CONST = 1
LOAD = 2
STORE = 3
NEG_I = 4
NEG_R = 5
NOT = 6
ADD_I = 7
SUB_I = 8
MUL_I = 9
DIV_I = 10
MOD_I = 11
ADD_R = 12
SUB_R = 13
MUL_R = 14
DIV_R = 15
MOD_R = 16
LT = 17
LE = 18
GT = 19
GE = 20
EQ = 21
NE = 22
AND = 23
OR = 24
JMP = 25
JMPF = 26
TO_REAL = 27
SEL = 28

NAMES = {v: k for k, v in globals().items() if k.isupper() and isinstance(v, int)}
