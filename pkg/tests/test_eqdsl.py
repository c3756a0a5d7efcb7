from fractions import Fraction

import pytest
from hypothesis import given

from dimcheck.eqdsl import (
    INFER,
    Add,
    Call,
    Der,
    Div,
    DuplicateName,
    Integ,
    ModelError,
    Mul,
    Neg,
    Num,
    ParseError,
    Pow,
    Span,
    Sub,
    UndeclaredIdentifier,
    UnknownBaseDimension,
    Var,
    format_equation,
    format_expr,
    parse_expr,
    parse_model,
    tokenize_line,
    walk,
)
from strategies import SPEC, exprs

ECON = """\
dims T QK QL QP U
var K : QK
var L : QL/T
var wK : 1
var wL : QK/QL
var k : QK/QP
var a0 : infer
param alpha : 1 = 1/3
param rho : 1/T
"""


@pytest.fixture(scope="module")
def econ_spec():
    return parse_model(ECON, "econ")


class TestParseModel:
    def test_stock_flow(self):
        spec = parse_model("dims T QK\nvar K : QK\nvar I : QK/T\neq acc: der(K) = I")
        assert len(spec.eqs) == 1
        assert spec.eqs[0].lhs == Der(Var("K"))
        assert spec.eqs[0].rhs == Var("I")

    def test_error_position(self):
        with pytest.raises(ParseError) as info:
            parse_model("dims T\nvar x : T\neq e1: x = +")
        assert (info.value.line, info.value.col) == (3, 11)

    def test_duplicate(self):
        with pytest.raises(DuplicateName) as info:
            parse_model("dims T\nvar x : T\nvar x : T")
        assert info.value.line == 3

    def test_duplicate_across_kinds(self):
        with pytest.raises(DuplicateName):
            parse_model("dims T\nvar x : T\nparam x : T")

    def test_time_is_reserved(self):
        with pytest.raises(DuplicateName):
            parse_model("dims T\nvar t : T")

    def test_undeclared(self):
        with pytest.raises(UndeclaredIdentifier) as info:
            parse_model("dims T\nvar x : T\neq e: x = zz")
        assert info.value.span == Span(3, 10, 12)

    def test_unknown_base(self):
        with pytest.raises(UnknownBaseDimension):
            parse_model("dims T\nvar x : QK")

    def test_der_needs_time(self):
        with pytest.raises(UnknownBaseDimension):
            parse_model("dims QK\nvar x : QK\neq e: der(x) = x")

    def test_dims_must_come_first(self):
        with pytest.raises(ParseError):
            parse_model("var x : T\ndims T")

    def test_comments_and_blanks(self):
        spec = parse_model("# header\n\ndims T  # time\nvar x : T # a stock\n")
        assert list(spec.vars) == ["x"]

    def test_infer_and_params(self, econ_spec):
        assert econ_spec.vars["a0"] is INFER
        assert econ_spec.params["alpha"].value == Fraction(1, 3)
        assert econ_spec.params["rho"].value is None
        assert econ_spec.unknowns() == ["a0"]

    def test_functions(self):
        spec = parse_model("dims T QK\nfn F(QK, QK/T) -> QK/T\nfn g transcendental(2)")
        assert spec.funcs["F"].arity == 2 and spec.funcs["F"].kind == "declared"
        assert spec.funcs["g"].kind == "transcendental"

    def test_arity_checked(self):
        with pytest.raises(ParseError):
            parse_model("dims T QK\nvar x : QK\nfn F(QK) -> QK\neq e: x = F(x, x)")

    def test_equation_names_unique(self):
        with pytest.raises(DuplicateName):
            parse_model("dims T\nvar x : T\neq e: x = x\neq e: x = x")

    def test_declarations_after_equations(self):
        spec = parse_model("dims T\neq e: x = y\nvar x : T\nvar y : T")
        assert spec.eqs[0].rhs == Var("y")

    def test_deterministic(self, corpus):
        text = (corpus / "corrected_model.model").read_text()
        a, b = parse_model(text), parse_model(text)
        assert [(e.name, e.lhs, e.rhs) for e in a.eqs] == [(e.name, e.lhs, e.rhs) for e in b.eqs]

    @pytest.mark.parametrize(
        "text",
        [
            "dims T\nvar x T",
            "dims T\nvar x : T\neq : x = x",
            "dims T\nvar x : T\neq e: x = (x",
            "dims T\nvar x : T\neq e: x = x)",
            "dims T\nvar x : T\neq e: x x",
            "dims T\nparam p : 1 = abc",
            "dims T\nbogus x",
            "dims T\nvar der : T",
        ],
    )
    def test_errors_carry_spans(self, text):
        with pytest.raises(ModelError) as info:
            parse_model(text)
        span = info.value.span
        line = text.splitlines()[span.line - 1]
        assert 0 <= span.cs <= len(line)
        assert span.cs <= span.ce


class TestParseExpr:
    def test_income(self, econ_spec):
        got = parse_expr("wK*K + wL*L", econ_spec)
        assert got == Add((Mul((Var("wK"), Var("K"))), Mul((Var("wL"), Var("L")))))

    def test_cobb_douglas(self, econ_spec):
        assert parse_expr("a0*k^alpha", econ_spec) == Mul((Var("a0"), Pow(Var("k"), "alpha")))

    def test_discount(self, econ_spec):
        got = parse_expr("exp(-rho*t)", econ_spec)
        assert got == Call("exp", (Neg(Mul((Var("rho"), Var("t")))),))

    def test_power_right_assoc_folds_integers(self, econ_spec):
        assert parse_expr("k^2^3", econ_spec) == Pow(Var("k"), Fraction(8))

    def test_rational_exponent(self, econ_spec):
        assert parse_expr("k^(1/3)", econ_spec) == Pow(Var("k"), Fraction(1, 3))
        assert parse_expr("k^(-2)", econ_spec) == Pow(Var("k"), Fraction(-2))
        assert parse_expr("k^-2", econ_spec) == Pow(Var("k"), Fraction(-2))

    def test_left_assoc(self, econ_spec):
        assert parse_expr("K/K/K", econ_spec) == Div(Div(Var("K"), Var("K")), Var("K"))
        assert parse_expr("K - K - K", econ_spec) == Sub(Sub(Var("K"), Var("K")), Var("K"))

    def test_parens_override(self, econ_spec):
        assert parse_expr("K*(K + K)", econ_spec) == Mul((Var("K"), Add((Var("K"), Var("K")))))

    def test_factor_negation(self, econ_spec):
        assert parse_expr("K * -K", econ_spec) == Mul((Var("K"), Neg(Var("K"))))

    def test_integ(self, econ_spec):
        assert parse_expr("integ(K)", econ_spec) == Integ(Var("K"))

    def test_spans_nest(self, econ_spec):
        e = parse_expr("wK*K + wL*(L + L)^2", econ_spec)

        def check(node):
            for c in node.children():
                assert node.span.contains(c.span)
                check(c)

        check(e)
        assert e.span == Span(1, 0, 19)

    def test_numbers(self, econ_spec):
        assert parse_expr("0.25", econ_spec) == Num(Fraction(1, 4))


class TestFormat:
    def test_income(self):
        e = Add((Mul((Var("wK"), Var("K"))), Mul((Var("wL"), Var("L")))))
        assert format_expr(e) == "wK * K + wL * L"

    def test_pow(self):
        assert format_expr(Pow(Var("k"), Fraction(1, 3))) == "k^(1/3)"

    def test_der(self):
        assert format_expr(Der(Var("K"))) == "der(K)"

    def test_minus_grouping(self):
        assert format_expr(Sub(Var("a"), Sub(Var("b"), Var("c")))) == "a - (b - c)"
        assert format_expr(Neg(Add((Var("a"), Var("b"))))) == "-(a + b)"

    def test_equation(self, corpus):
        spec = parse_model((corpus / "eq2_income_naive.model").read_text())
        assert format_equation(spec.eqs[0]) == "eq eq2_income: YH = wK * KH + wL * LH"


def test_tokenizer_spans():
    toks = tokenize_line("x = a0*k^(1/3)", 4)
    assert [t.value for t in toks[:5]] == ["x", "=", "a0", "*", "k"]
    assert toks[2].span == Span(4, 4, 6)
    assert toks[-1].kind == "eof"


@given(exprs)
def test_roundtrip(e):
    back = parse_expr(format_expr(e), SPEC)
    assert back == e


@given(exprs)
def test_format_is_fixed_point(e):
    text = format_expr(e)
    assert format_expr(parse_expr(text, SPEC)) == text


@given(exprs)
def test_parsed_spans_nest(e):
    parsed = parse_expr(format_expr(e), SPEC)
    for node in walk(parsed):
        for c in node.children():
            assert node.span.contains(c.span)
