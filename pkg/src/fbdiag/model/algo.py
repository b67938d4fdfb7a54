"""Lexer, parser and pretty-printer for the algorithm statement language.

The language is a small structured-text dialect::

    TEMP_C := (TEMP_F - 32.0) * 5.0 / 9.0;
    IF A > B THEN M := A; ELSE M := B; END_IF;

Expressions support literals, variables, unary ``-``/``NOT``, the binary
operators ``+ - * / % < <= > >= = <> AND OR`` and ``SEL(g, in0, in1)``.
Comments are ``(* ... *)`` or ``// ...``.
"""

import re

from ..errors import ParseError
from . import ast
from .values import INT_MAX, INT_MIN, check_finite, format_literal

KEYWORDS = {"IF", "THEN", "ELSE", "END_IF", "AND", "OR", "NOT", "TRUE", "FALSE", "SEL", "MOD"}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\(\*.*?\*\)|//[^\n]*)
  | (?P<number>\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)
  | (?P<string>'(?:\$.|[^'$])*')
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>:=|<=|>=|<>|[-+*/%<>=();,])
    """,
    re.VERBOSE | re.DOTALL,
)


class Token:
    __slots__ = ("kind", "text", "value", "line", "col")

    def __init__(self, kind, text, value, line, col):
        self.kind = kind
        self.text = text
        self.value = value
        self.line = line
        self.col = col

    def __repr__(self):
        return f"Token({self.kind}, {self.text!r}, {self.line}:{self.col})"


def tokenize(text, line=1, col=1):
    """Split ``text`` into tokens; ``line``/``col`` offset positions when the
    source is embedded in a larger document."""
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        chunk = m.group()
        if kind == "number":
            if "." in chunk or "e" in chunk or "E" in chunk:
                value = check_finite(float(chunk))
            else:
                value = int(chunk)
            tokens.append(Token("number", chunk, value, line, col))
        elif kind == "string":
            body = chunk[1:-1]
            value = re.sub(r"\$(.)", lambda g: g.group(1), body)
            tokens.append(Token("string", chunk, value, line, col))
        elif kind == "ident":
            upper = chunk.upper()
            if upper in KEYWORDS:
                tokens.append(Token("kw", upper, None, line, col))
            else:
                tokens.append(Token("ident", chunk, chunk, line, col))
        elif kind == "op":
            tokens.append(Token("op", chunk, None, line, col))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            col = len(chunk) - chunk.rfind("\n")
        else:
            col += len(chunk)
        pos = m.end()
    tokens.append(Token("eof", "", None, line, col))
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def advance(self):
        t = self.tokens[self.i]
        self.i += 1
        return t

    def at(self, kind, text=None):
        t = self.tok
        return t.kind == kind and (text is None or t.text == text)

    def expect(self, kind, text=None):
        if not self.at(kind, text):
            want = text or kind
            t = self.tok
            got = t.text or t.kind
            raise ParseError(f"expected {want!r}, found {got!r}", t.line, t.col)
        return self.advance()

    # statements

    def statements(self, terminators):
        out = []
        while not any(self.at("kw", k) for k in terminators) and not self.at("eof"):
            out.append(self.statement())
        return tuple(out)

    def statement(self):
        t = self.tok
        if self.at("kw", "IF"):
            self.advance()
            test = self.expression()
            self.expect("kw", "THEN")
            body = self.statements(("ELSE", "END_IF"))
            orelse = ()
            if self.at("kw", "ELSE"):
                self.advance()
                orelse = self.statements(("END_IF",))
            self.expect("kw", "END_IF")
            self.expect("op", ";")
            return ast.If(test, body, orelse, pos=(t.line, t.col))
        if self.at("ident"):
            name = self.advance().text
            self.expect("op", ":=")
            expr = self.expression()
            self.expect("op", ";")
            return ast.Assign(name, expr, pos=(t.line, t.col))
        raise ParseError(f"expected a statement, found {t.text or t.kind!r}", t.line, t.col)

    # expressions: precedence climbing over ast.PRECEDENCE

    def expression(self, min_prec=1):
        left = self.unary()
        while True:
            t = self.tok
            op = self._binary_op(t)
            if op is None:
                return left
            prec = ast.PRECEDENCE[op]
            if prec < min_prec:
                return left
            self.advance()
            right = self.expression(prec + 1)
            left = ast.Binary(op, left, right, pos=(t.line, t.col))

    @staticmethod
    def _binary_op(t):
        if t.kind == "op" and t.text in ast.PRECEDENCE:
            return t.text
        if t.kind == "kw":
            if t.text in ("AND", "OR"):
                return t.text
            if t.text == "MOD":
                return "%"
        return None

    def unary(self):
        t = self.tok
        if self.at("op", "-"):
            self.advance()
            nxt = self.tok
            if nxt.kind == "number" and nxt.line == t.line and nxt.col == t.col + 1:
                self.advance()
                value = -nxt.value
                if isinstance(value, int) and value < INT_MIN:
                    raise ParseError("INT literal out of range", nxt.line, nxt.col)
                return ast.Lit(value, pos=(t.line, t.col))
            return ast.Unary("-", self.unary(), pos=(t.line, t.col))
        if self.at("kw", "NOT"):
            self.advance()
            return ast.Unary("NOT", self.unary(), pos=(t.line, t.col))
        return self.primary()

    def primary(self):
        t = self.advance()
        pos = (t.line, t.col)
        if t.kind == "number":
            if isinstance(t.value, int) and t.value > INT_MAX:
                raise ParseError("INT literal out of range", t.line, t.col)
            return ast.Lit(t.value, pos=pos)
        if t.kind == "string":
            return ast.Lit(t.value, pos=pos)
        if t.kind == "kw" and t.text in ("TRUE", "FALSE"):
            return ast.Lit(t.text == "TRUE", pos=pos)
        if t.kind == "kw" and t.text == "SEL":
            self.expect("op", "(")
            test = self.expression()
            self.expect("op", ",")
            orelse = self.expression()
            self.expect("op", ",")
            then = self.expression()
            self.expect("op", ")")
            return ast.Cond(test, then, orelse, pos=pos)
        if t.kind == "ident":
            return ast.Var(t.text, pos=pos)
        if t.kind == "op" and t.text == "(":
            inner = self.expression()
            self.expect("op", ")")
            return inner
        raise ParseError(f"expected an expression, found {t.text or t.kind!r}", t.line, t.col)


def parse_algorithm(text, line=1, col=1):
    """Parse statement source into a tuple of statements."""
    p = _Parser(tokenize(text, line, col))
    stmts = p.statements(())
    p.expect("eof")
    return stmts


def parse_expression(text, line=1, col=1):
    p = _Parser(tokenize(text, line, col))
    expr = p.expression()
    p.expect("eof")
    return expr


# printing


def format_expression(e):
    if isinstance(e, ast.Lit):
        return format_literal(e.value)
    if isinstance(e, ast.Var):
        return e.name
    if isinstance(e, ast.Cond):
        return (f"SEL({format_expression(e.test)}, {format_expression(e.orelse)}, "
                f"{format_expression(e.then)})")
    if isinstance(e, ast.Unary):
        inner = format_expression(e.operand)
        wrap = isinstance(e.operand, (ast.Binary, ast.Unary)) or (
            isinstance(e.operand, ast.Lit) and e.op == "-" and not isinstance(e.operand.value, str)
        )
        if wrap:
            inner = f"({inner})"
        return f"NOT {inner}" if e.op == "NOT" else f"-{inner}"
    if isinstance(e, ast.Binary):
        prec = ast.PRECEDENCE[e.op]
        left = format_expression(e.left)
        right = format_expression(e.right)
        if isinstance(e.left, ast.Binary) and ast.PRECEDENCE[e.left.op] < prec:
            left = f"({left})"
        if isinstance(e.right, ast.Binary) and ast.PRECEDENCE[e.right.op] <= prec:
            right = f"({right})"
        return f"{left} {e.op} {right}"
    raise TypeError(f"not an expression node: {e!r}")


def format_statements(stmts, indent=""):
    lines = []
    for s in stmts:
        if isinstance(s, ast.Assign):
            lines.append(f"{indent}{s.target} := {format_expression(s.expr)};")
        else:
            lines.append(f"{indent}IF {format_expression(s.test)} THEN")
            lines.extend(format_statements(s.body, indent + "  "))
            if s.orelse:
                lines.append(f"{indent}ELSE")
                lines.extend(format_statements(s.orelse, indent + "  "))
            lines.append(f"{indent}END_IF;")
    return lines


def format_algorithm(stmts):
    return "\n".join(format_statements(stmts))
