import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fbdiag.errors import DescriptorError, DivisionByZero, ParseError
from fbdiag.hvac.fixtures import ROOM_CONTROLLER, fixture_text
from fbdiag.model import (
    eval_expression, exec_statements, format_algorithm, format_expression, format_system,
    parse_algorithm, parse_expression, parse_system, parse_system_unchecked, validate,
)
from fbdiag.model import ast

MINIMAL = """
fbtype ONE basic
  event_in REQ
  state S
end_fbtype
"""


def codes(text):
    with pytest.raises(DescriptorError) as info:
        parse_system(text)
    return [d.code for d in info.value.diagnostics]


def room_text():
    return ROOM_CONTROLLER.read_text(encoding="utf-8")


class TestAlgorithmLanguage:

    def test_conversion_statement(self):
        stmts = parse_algorithm("TEMP_C := (TEMP_F - 32.0) * 5.0 / 9.0;")
        assert len(stmts) == 1
        assert isinstance(stmts[0], ast.Assign) and stmts[0].target == "TEMP_C"
        env = exec_statements(stmts, {"TEMP_F": 70.0})
        assert env["TEMP_C"] == pytest.approx((70 - 32) * 5 / 9, abs=1e-9)

    def test_precedence(self):
        env = exec_statements(parse_algorithm("X := 1 + 2 * 3;"), {})
        assert env["X"] == 7

    def test_max_of_two(self):
        stmts = parse_algorithm("IF A > B THEN M := A; ELSE M := B; END_IF;")
        assert isinstance(stmts[0], ast.If)
        assert exec_statements(stmts, {"A": 2, "B": 5})["M"] == 5

    def test_closed_form_conversion(self):
        v = eval_expression(parse_expression("(70.0 - 32.0) * 5.0 / 9.0"), {})
        assert abs(v - 21.111111111111111) < 1e-9

    def test_not_true(self):
        assert eval_expression(parse_expression("NOT TRUE"), {}) is False

    def test_int_real_promotion(self):
        assert eval_expression(parse_expression("1 + 2.5"), {}) == 3.5
        assert type(eval_expression(parse_expression("7 / 2"), {})) is int
        assert eval_expression(parse_expression("-7 / 2"), {}) == -3

    def test_division_by_zero_is_runtime(self):
        expr = parse_expression("X / 0")
        with pytest.raises(DivisionByZero):
            eval_expression(expr, {"X": 3})
        with pytest.raises(DivisionByZero):
            eval_expression(parse_expression("X / 0.0"), {"X": 3.0})

    def test_syntax_error_has_position(self):
        with pytest.raises(ParseError) as info:
            parse_algorithm("X := ;")
        assert (info.value.line, info.value.col) == (1, 6)

    def test_sel(self):
        assert eval_expression(parse_expression("SEL(FALSE, 1, 2)"), {}) == 1
        assert eval_expression(parse_expression("SEL(TRUE, 1, 2.0)"), {}) == 2.0

    def test_comments(self):
        stmts = parse_algorithm("(* note *) X := 1; // trailing\n")
        assert len(stmts) == 1

    @pytest.mark.parametrize("src", [
        "X := 1 + 2 * 3;",
        "IF A > B THEN M := A; ELSE M := B; END_IF;",
        "Y := -(A - B) * -3.5;",
        "IF NOT F AND (A <> B OR A >= 2) THEN Z := SEL(F, 1, 2) MOD 3; END_IF;",
    ])
    def test_print_parse_identity(self, src):
        stmts = parse_algorithm(src)
        assert parse_algorithm(format_algorithm(stmts)) == stmts


_names = st.sampled_from(["A", "B", "C"])
_leaf = st.one_of(
    st.integers(-1000, 1000).map(ast.Lit),
    st.floats(-1e6, 1e6, allow_nan=False).map(ast.Lit),
    st.booleans().map(ast.Lit),
    _names.map(ast.Var),
)
_expr = st.recursive(_leaf, lambda sub: st.one_of(
    st.tuples(st.sampled_from(ast.BINARY_OPS), sub, sub).map(lambda t: ast.Binary(*t)),
    st.tuples(st.sampled_from(ast.UNARY_OPS), sub).map(lambda t: ast.Unary(*t)),
    st.tuples(sub, sub, sub).map(lambda t: ast.Cond(*t)),
), max_leaves=12)


@settings(max_examples=300, deadline=None)
@given(_expr)
def test_expression_print_parse_roundtrip(expr):
    # structural, so untyped trees are fine here
    assert parse_expression(format_expression(expr)) == expr


class TestDescriptor:

    def test_minimal_document(self):
        desc = parse_system(MINIMAL)
        assert len(desc.fb_types) == 1
        assert desc.connections == ()

    def test_room_fixture_has_five_dps(self):
        desc = parse_system(room_text())
        assert validate(desc) == []
        assert sorted(d.id for d in desc.diagnostic_points) == [1, 2, 3, 4, 5]
        assert {d.pathway for d in desc.diagnostic_points} == {"temp"}
        mainline = sorted((d.order, d.id) for d in desc.diagnostic_points if d.role == "mainline")
        assert [i for _, i in mainline] == [1, 2, 5]

    def test_room_fixture_instances(self):
        desc = parse_system(room_text())
        assert len(list(desc.instances())) == 8

    def test_real_to_bool_type_mismatch(self):
        text = """
fbtype SRC basic
  data_out X REAL = 0.0
  state S
end_fbtype
fbtype DST basic
  data_in B BOOL = FALSE
  state S
end_fbtype
device D
subapp A on D
  instance S1 : SRC
  instance D1 : DST
end_subapp
connect data S1.X -> D1.B
"""
        with pytest.raises(DescriptorError) as info:
            parse_system(text)
        (diag,) = info.value.diagnostics
        assert diag.code == "TypeMismatch" and diag.line == 15

    def test_duplicate_dp_order(self):
        text = room_text().replace("dp 2 pathway temp order 3", "dp 2 pathway temp order 1")
        assert codes(text) == ["BadDp"]

    def test_undeclared_trigger(self):
        text = MINIMAL.replace("  state S\n", "  state S\n  state T\n  transition S -> T on NOPE\n")
        assert codes(text) == ["BadEcc"]

    def test_dangling_connection(self):
        text = room_text() + "connect event Z_TEMPERATURE.SAMPLED -> GHOST.REQ\n"
        assert codes(text) == ["DanglingConnection"]

    def test_multiple_drivers(self):
        text = room_text() + "connect data Z_TEMPERATURE.TEMP -> F_TO_C_CONV.TEMP_F\n"
        found = codes(text)
        assert "MultipleDrivers" in found

    def test_unknown_type(self):
        text = MINIMAL + "device D\nsubapp S on D\n  instance X : MISSING\nend_subapp\n"
        assert codes(text) == ["UnknownType"]

    def test_duplicate_instance(self):
        text = MINIMAL + ("device D\nsubapp S on D\n  instance X : ONE\n  instance X : ONE\n"
                          "end_subapp\n")
        assert codes(text) == ["DuplicateName"]

    def test_nan_literal_rejected(self):
        text = "fbtype N basic\n  data_in X REAL = nan\n  state S\nend_fbtype\n"
        assert codes(text) == ["SyntaxError"]

    def test_syntax_error_reports_line(self):
        with pytest.raises(DescriptorError) as info:
            parse_system("fbtype X basic\n  bogus line\nend_fbtype\n")
        assert info.value.diagnostics[0].line == 2

    @pytest.mark.parametrize("name", ["room_controller.fbsys", "two_room.fbsys"])
    def test_format_roundtrip(self, name):
        desc = parse_system(fixture_text(name))
        again = parse_system(format_system(desc))
        assert again == desc
        assert format_system(again) == format_system(desc)

    def test_unchecked_parse_keeps_invalid(self):
        desc = parse_system_unchecked(MINIMAL.replace("state S\n", "state S\n  transition S -> Q\n"))
        assert [d.code for d in validate(desc)] == ["BadEcc"]


@settings(max_examples=200, deadline=None)
@given(st.floats(-1e4, 1e4, allow_nan=False), st.floats(-1e4, 1e4, allow_nan=False))
def test_real_arithmetic_matches_python(a, b):
    env = {"A": a, "B": b}
    assert eval_expression(parse_expression("A + B * 2.0"), env) == a + b * 2.0
    if b != 0:
        assert eval_expression(parse_expression("A / B"), env) == a / b
        assert eval_expression(parse_expression("A % B"), env) == math.fmod(a, b)
