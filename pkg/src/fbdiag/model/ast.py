"""Expression and statement trees for the algorithm language.

Positions are carried for diagnostics but excluded from equality, so a tree
re-parsed from its pretty-printed form compares equal to the original.
"""

from dataclasses import dataclass, field
from typing import Any, Tuple, Union

UNARY_OPS = ("-", "NOT")
ARITH_OPS = ("+", "-", "*", "/", "%")
COMPARE_OPS = ("<", "<=", ">", ">=", "=", "<>")
LOGIC_OPS = ("AND", "OR")
BINARY_OPS = ARITH_OPS + COMPARE_OPS + LOGIC_OPS

# binding strength, higher binds tighter
PRECEDENCE = {
    "OR": 1,
    "AND": 2,
    "<": 3, "<=": 3, ">": 3, ">=": 3, "=": 3, "<>": 3,
    "+": 4, "-": 4,
    "*": 5, "/": 5, "%": 5,
}
UNARY_PRECEDENCE = 6


@dataclass(frozen=True, eq=False)
class Lit:
    value: Any
    pos: Tuple[int, int] = field(default=(0, 0), compare=False, repr=False)

    # TRUE == 1 == 1.0 in Python; literals of different kinds must differ
    def __eq__(self, other):
        return (isinstance(other, Lit) and type(self.value) is type(other.value)
                and self.value == other.value)

    def __hash__(self):
        return hash((type(self.value), self.value))


@dataclass(frozen=True)
class Var:
    name: str
    pos: Tuple[int, int] = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Unary:
    op: str
    operand: "Expr"
    pos: Tuple[int, int] = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"
    pos: Tuple[int, int] = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Cond:
    """``SEL(test, orelse, then)``: ``then`` when test is TRUE."""

    test: "Expr"
    then: "Expr"
    orelse: "Expr"
    pos: Tuple[int, int] = field(default=(0, 0), compare=False, repr=False)


Expr = Union[Lit, Var, Unary, Binary, Cond]


@dataclass(frozen=True)
class Assign:
    target: str
    expr: Expr
    pos: Tuple[int, int] = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class If:
    test: Expr
    body: Tuple["Stmt", ...]
    orelse: Tuple["Stmt", ...] = ()
    pos: Tuple[int, int] = field(default=(0, 0), compare=False, repr=False)


Stmt = Union[Assign, If]
StatementList = Tuple[Stmt, ...]


def walk_names(node):
    """Yield every variable name read or written below ``node``."""
    if isinstance(node, Var):
        yield node.name
    elif isinstance(node, Unary):
        yield from walk_names(node.operand)
    elif isinstance(node, Binary):
        yield from walk_names(node.left)
        yield from walk_names(node.right)
    elif isinstance(node, Cond):
        yield from walk_names(node.test)
        yield from walk_names(node.then)
        yield from walk_names(node.orelse)
    elif isinstance(node, Assign):
        yield node.target
        yield from walk_names(node.expr)
    elif isinstance(node, If):
        yield from walk_names(node.test)
        for s in node.body + node.orelse:
            yield from walk_names(s)
