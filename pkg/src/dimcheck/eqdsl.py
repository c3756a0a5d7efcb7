"""Line-oriented model language: declarations, equations and their ASTs.

Grammar (one declaration per line, ``#`` starts a comment)::

    dims <name>+
    var <name> : <dimexpr> | var <name> : infer
    param <name> : <dimexpr> [= <rational>]
    fn <name>(<dimexpr>[, <dimexpr>]*) -> <dimexpr>
    fn <name> transcendental(<arity>)
    eq <name>: <expr> = <expr>

Expression precedence, loosest first: ``+ -``, leading unary ``-`` of a term,
``* /``, unary ``-`` of a factor, ``^`` (right-associative), atoms.  ``der(x)``
and ``integ(x)`` differentiate and integrate with respect to the time
variable ``t``, which exists whenever the base set contains ``T``.

Columns in spans and errors are 0-based; lines are 1-based.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Union

from .dimcore import Dimension, DimensionSystem

TIME_BASE = "T"
TIME_VAR = "t"
RESERVED = frozenset({"der", "integ", TIME_VAR})
BUILTIN_TRANSCENDENTAL = ("exp", "log", "ln", "sin", "cos", "tan")


class _InferMarker:
    def __repr__(self):
        return "INFER"

    def __reduce__(self):
        return "INFER"


INFER = _InferMarker()


# --------------------------------------------------------------------------
# errors
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Span:
    line: int
    cs: int
    ce: int

    def contains(self, other: "Span") -> bool:
        return self.line == other.line and self.cs <= other.cs and other.ce <= self.ce

    def to_json(self) -> dict:
        return {"line": self.line, "cs": self.cs, "ce": self.ce}


class ModelError(Exception):
    """Any error raised while reading a model; always carries a span."""

    def __init__(self, message: str, span: Span):
        super().__init__(f"line {span.line}, col {span.cs}: {message}")
        self.message = message
        self.span = span

    @property
    def line(self) -> int:
        return self.span.line

    @property
    def col(self) -> int:
        return self.span.cs


class ParseError(ModelError):
    def __init__(self, span: Span, expected: str, found: str):
        super().__init__(f"expected {expected}, found {found}", span)
        self.expected = expected
        self.found = found


class DuplicateName(ModelError):
    def __init__(self, name: str, span: Span):
        super().__init__(f"duplicate name {name!r}", span)
        self.name = name


class UndeclaredIdentifier(ModelError):
    def __init__(self, name: str, span: Span):
        super().__init__(f"undeclared identifier {name!r}", span)
        self.name = name


class UnknownBaseDimension(ModelError):
    def __init__(self, name: str, span: Span):
        super().__init__(f"unknown base dimension {name!r}", span)
        self.name = name


# --------------------------------------------------------------------------
# AST
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Expr:
    span: Span | None = field(default=None, compare=False, repr=False, kw_only=True)

    def children(self) -> tuple["Expr", ...]:
        return ()


@dataclass(frozen=True)
class Num(Expr):
    value: Fraction


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class Add(Expr):
    terms: tuple[Expr, ...]

    def __post_init__(self):
        if len(self.terms) < 2:
            raise ValueError("Add needs at least two terms")

    def children(self):
        return self.terms


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class Mul(Expr):
    factors: tuple[Expr, ...]

    def __post_init__(self):
        if len(self.factors) < 2:
            raise ValueError("Mul needs at least two factors")

    def children(self):
        return self.factors


@dataclass(frozen=True)
class Div(Expr):
    left: Expr
    right: Expr

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: Union[Fraction, str]

    def children(self):
        return (self.base,)


@dataclass(frozen=True)
class Neg(Expr):
    operand: Expr

    def children(self):
        return (self.operand,)


@dataclass(frozen=True)
class Der(Expr):
    operand: Expr

    def children(self):
        return (self.operand,)


@dataclass(frozen=True)
class Integ(Expr):
    operand: Expr

    def children(self):
        return (self.operand,)


@dataclass(frozen=True)
class Call(Expr):
    fname: str
    args: tuple[Expr, ...]

    def children(self):
        return self.args


def walk(e: Expr) -> Iterator[Expr]:
    """Pre-order traversal."""
    yield e
    for c in e.children():
        yield from walk(c)


# --------------------------------------------------------------------------
# model
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class FuncSig:
    name: str
    arity: int
    kind: str  # "transcendental" | "declared"
    arg_dims: tuple[Dimension, ...] = ()
    result_dim: Dimension | None = None

    def __post_init__(self):
        if self.arity < 1:
            raise ValueError("function arity must be at least 1")
        if self.kind not in ("transcendental", "declared"):
            raise ValueError(f"unknown function kind {self.kind!r}")
        if self.kind == "declared" and (len(self.arg_dims) != self.arity or self.result_dim is None):
            raise ValueError("declared function needs one dimension per argument and a result")


@dataclass(frozen=True)
class Param:
    dim: Dimension
    value: Fraction | None = None


@dataclass(frozen=True)
class Equation:
    name: str
    lhs: Expr
    rhs: Expr
    line: int


@dataclass
class ModelSpec:
    system: DimensionSystem
    vars: dict[str, Dimension | _InferMarker] = field(default_factory=dict)
    params: dict[str, Param] = field(default_factory=dict)
    funcs: dict[str, FuncSig] = field(default_factory=dict)
    eqs: list[Equation] = field(default_factory=list)
    source: str = ""
    name: str = "<model>"
    decl_spans: dict[str, Span] = field(default_factory=dict, compare=False, repr=False)

    @property
    def has_time(self) -> bool:
        return TIME_BASE in self.system

    def source_line(self, line: int) -> str:
        lines = self.source.splitlines()
        return lines[line - 1] if 0 < line <= len(lines) else ""

    def is_value_name(self, name: str) -> bool:
        return name in self.vars or name in self.params or (name == TIME_VAR and self.has_time)

    def function(self, name: str) -> FuncSig | None:
        if name in self.funcs:
            return self.funcs[name]
        if name in BUILTIN_TRANSCENDENTAL:
            return FuncSig(name, 1, "transcendental")
        return None

    def unknowns(self) -> list[str]:
        return [n for n, d in self.vars.items() if d is INFER]


# --------------------------------------------------------------------------
# lexer
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Token:
    kind: str  # name | num | op | eof
    value: str
    span: Span


_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<num>\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[^\W\d]\w*)"
    r"|(?P<op>->|[-+*/^(),=:])"
)


def tokenize_line(text: str, line: int = 1) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(Span(line, pos, pos + 1), "a token", repr(text[pos]))
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, m.group(), Span(line, m.start(), m.end())))
        pos = m.end()
    end = len(text.rstrip())
    tokens.append(Token("eof", "", Span(line, end, end + 1)))
    return tokens


def _describe(tok: Token) -> str:
    return "end of line" if tok.kind == "eof" else repr(tok.value)


class _Cursor:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.i + ahead, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.peek()
        if tok.kind != "eof":
            self.i += 1
        return tok

    def at(self, value: str) -> bool:
        tok = self.peek()
        return tok.kind == "op" and tok.value == value

    def expect(self, value: str, what: str | None = None) -> Token:
        tok = self.peek()
        if tok.kind == "op" and tok.value == value:
            return self.next()
        raise ParseError(tok.span, what or repr(value), _describe(tok))

    def expect_kind(self, kind: str, what: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(tok.span, what, _describe(tok))
        return self.next()

    def expect_eof(self):
        tok = self.peek()
        if tok.kind != "eof":
            raise ParseError(tok.span, "end of line", _describe(tok))


def _join(a: Span, b: Span) -> Span:
    return Span(a.line, min(a.cs, b.cs), max(a.ce, b.ce))


# --------------------------------------------------------------------------
# expression parser
# --------------------------------------------------------------------------


class _ExprParser:
    def __init__(self, cur: _Cursor, spec: ModelSpec):
        self.cur = cur
        self.spec = spec

    def sum(self) -> Expr:
        acc = self.term()
        flat = False
        while self.cur.at("+") or self.cur.at("-"):
            op = self.cur.next().value
            rhs = self.term()
            span = _join(acc.span, rhs.span)
            if op == "+":
                terms = acc.terms + (rhs,) if flat else (acc, rhs)
                acc = Add(terms, span=span)
                flat = True
            else:
                acc = Sub(acc, rhs, span=span)
                flat = False
        return acc

    def term(self) -> Expr:
        if self.cur.at("-"):
            tok = self.cur.next()
            inner = self.term()
            return Neg(inner, span=_join(tok.span, inner.span))
        return self.product()

    def product(self) -> Expr:
        acc = self.unary()
        flat = False
        while self.cur.at("*") or self.cur.at("/"):
            op = self.cur.next().value
            rhs = self.unary()
            span = _join(acc.span, rhs.span)
            if op == "*":
                factors = acc.factors + (rhs,) if flat else (acc, rhs)
                acc = Mul(factors, span=span)
                flat = True
            else:
                acc = Div(acc, rhs, span=span)
                flat = False
        return acc

    def unary(self) -> Expr:
        if self.cur.at("-"):
            tok = self.cur.next()
            inner = self.unary()
            return Neg(inner, span=_join(tok.span, inner.span))
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.cur.at("^"):
            self.cur.next()
            exponent, end = self.exponent()
            return Pow(base, exponent, span=Span(base.span.line, base.span.cs, end))
        return base

    def exponent(self) -> tuple[Fraction | str, int]:
        cur = self.cur
        tok = cur.peek()
        if cur.at("("):
            cur.next()
            if cur.peek().kind == "name":
                value: Fraction | str = self._exp_name(cur.next())
            else:
                value = self._signed_rational(allow_slash=True)
            end = cur.expect(")").span.ce
        elif cur.at("-"):
            value = self._signed_rational(allow_slash=False)
            end = cur.tokens[cur.i - 1].span.ce
        elif tok.kind == "num":
            value = Fraction(cur.next().value)
            end = tok.span.ce
        elif tok.kind == "name":
            value = self._exp_name(cur.next())
            end = tok.span.ce
        else:
            raise ParseError(tok.span, "exponent", _describe(tok))
        if cur.at("^"):
            hat = cur.next()
            inner, end = self.exponent()
            if isinstance(value, str) or isinstance(inner, str) or inner.denominator != 1:
                raise ParseError(hat.span, "a single exponent (parenthesize the base)", "'^'")
            value = value ** inner.numerator
        return value, end

    def _exp_name(self, tok: Token) -> str:
        if not self.spec.is_value_name(tok.value):
            raise UndeclaredIdentifier(tok.value, tok.span)
        return tok.value

    def _signed_rational(self, allow_slash: bool) -> Fraction:
        cur = self.cur
        sign = 1
        if cur.at("-"):
            cur.next()
            sign = -1
        num = Fraction(cur.expect_kind("num", "number").value)
        if allow_slash and cur.at("/"):
            cur.next()
            tok = cur.expect_kind("num", "number")
            den = Fraction(tok.value)
            if den == 0:
                raise ParseError(tok.span, "nonzero denominator", "0")
            num = num / den
        return sign * num

    def atom(self) -> Expr:
        cur = self.cur
        tok = cur.peek()
        if tok.kind == "num":
            cur.next()
            return Num(Fraction(tok.value), span=tok.span)
        if tok.kind == "name":
            cur.next()
            if tok.value in ("der", "integ"):
                if not self.spec.has_time:
                    raise UnknownBaseDimension(TIME_BASE, tok.span)
                cur.expect("(")
                inner = self.sum()
                close = cur.expect(")")
                cls = Der if tok.value == "der" else Integ
                return cls(inner, span=Span(tok.span.line, tok.span.cs, close.span.ce))
            if cur.at("("):
                return self.call(tok)
            if not self.spec.is_value_name(tok.value):
                raise UndeclaredIdentifier(tok.value, tok.span)
            return Var(tok.value, span=tok.span)
        if cur.at("("):
            cur.next()
            inner = self.sum()
            cur.expect(")")
            return inner
        raise ParseError(tok.span, "expression", _describe(tok))

    def call(self, name_tok: Token) -> Expr:
        cur = self.cur
        sig = self.spec.function(name_tok.value)
        if sig is None:
            raise UndeclaredIdentifier(name_tok.value, name_tok.span)
        cur.expect("(")
        args = [self.sum()]
        while cur.at(","):
            cur.next()
            args.append(self.sum())
        close = cur.expect(")")
        span = Span(name_tok.span.line, name_tok.span.cs, close.span.ce)
        if len(args) != sig.arity:
            raise ParseError(span, f"{sig.arity} argument(s) to {sig.name}", f"{len(args)}")
        return Call(name_tok.value, tuple(args), span=span)


def parse_expr(text: str, spec: ModelSpec, line: int = 1) -> Expr:
    """Parse a single expression against the declarations of ``spec``."""
    cur = _Cursor(tokenize_line(text, line))
    e = _ExprParser(cur, spec).sum()
    cur.expect_eof()
    return e


# --------------------------------------------------------------------------
# model file parser
# --------------------------------------------------------------------------


def _dimexpr(cur: _Cursor, system: DimensionSystem) -> Dimension:
    d = _dimterm(cur, system)
    while cur.at("*") or cur.at("/"):
        op = cur.next().value
        rhs = _dimterm(cur, system)
        d = d * rhs if op == "*" else d / rhs
    return d


def _dimterm(cur: _Cursor, system: DimensionSystem) -> Dimension:
    tok = cur.peek()
    if tok.kind == "num":
        cur.next()
        if Fraction(tok.value) != 1:
            raise ParseError(tok.span, "base dimension or 1", _describe(tok))
        return system.one
    if tok.kind == "name":
        cur.next()
        if tok.value not in system:
            raise UnknownBaseDimension(tok.value, tok.span)
        d = system.base(tok.value)
    elif cur.at("("):
        cur.next()
        d = _dimexpr(cur, system)
        cur.expect(")")
    else:
        raise ParseError(tok.span, "dimension", _describe(tok))
    if cur.at("^"):
        cur.next()
        if cur.at("("):
            cur.next()
            sign = -1 if cur.at("-") and cur.next() else 1
            e = Fraction(cur.expect_kind("num", "number").value)
            if cur.at("/"):
                cur.next()
                den_tok = cur.expect_kind("num", "number")
                if Fraction(den_tok.value) == 0:
                    raise ParseError(den_tok.span, "nonzero denominator", "0")
                e /= Fraction(den_tok.value)
            cur.expect(")")
        else:
            sign = -1 if cur.at("-") and cur.next() else 1
            e = Fraction(cur.expect_kind("num", "number").value)
        d = d ** (sign * e)
    return d


def _rational(cur: _Cursor) -> Fraction:
    sign = -1 if cur.at("-") and cur.next() else 1
    value = Fraction(cur.expect_kind("num", "number").value)
    if cur.at("/"):
        cur.next()
        sign2 = -1 if cur.at("-") and cur.next() else 1
        tok = cur.expect_kind("num", "number")
        if Fraction(tok.value) == 0:
            raise ParseError(tok.span, "nonzero denominator", "0")
        value = value / (sign2 * Fraction(tok.value))
    return sign * value


def _strip_comment(line: str) -> str:
    i = line.find("#")
    return line if i < 0 else line[:i]


class _ModelReader:
    def __init__(self, text: str, name: str):
        self.text = text
        self.name = name
        self.spec: ModelSpec | None = None
        self.names: set[str] = set()
        self.eq_names: set[str] = set()

    def read(self) -> ModelSpec:
        lines = self.text.splitlines()
        pending_eqs: list[tuple[int, list[Token]]] = []
        for lineno, raw in enumerate(lines, start=1):
            body = _strip_comment(raw)
            if not body.strip():
                continue
            tokens = tokenize_line(body, lineno)
            head = tokens[0]
            if self.spec is None:
                if head.value != "dims":
                    raise ParseError(head.span, "'dims' declaration", _describe(head))
                self._dims(_Cursor(tokens))
                continue
            if head.kind != "name" or head.value not in ("dims", "var", "param", "fn", "eq"):
                raise ParseError(head.span, "declaration keyword", _describe(head))
            if head.value == "dims":
                raise ParseError(head.span, "a single 'dims' line", "second 'dims'")
            if head.value == "eq":
                pending_eqs.append((lineno, tokens))
                continue
            getattr(self, "_" + head.value)(_Cursor(tokens))
        if self.spec is None:
            end = Span(max(len(lines), 1), 0, 1)
            raise ParseError(end, "'dims' declaration", "end of file")
        # equations may reference declarations appearing later in the file
        for lineno, tokens in pending_eqs:
            self._eq(_Cursor(tokens), lineno)
        return self.spec

    def _declare(self, tok: Token) -> str:
        if tok.value in ("der", "integ"):
            raise ParseError(tok.span, "identifier", f"keyword {tok.value!r}")
        if tok.value in self.names or tok.value == TIME_VAR:
            raise DuplicateName(tok.value, tok.span)
        self.names.add(tok.value)
        self.spec.decl_spans[tok.value] = tok.span
        return tok.value

    def _dims(self, cur: _Cursor):
        cur.next()
        names = []
        while cur.peek().kind == "name":
            tok = cur.next()
            if tok.value in names:
                raise DuplicateName(tok.value, tok.span)
            names.append(tok.value)
        if not names:
            raise ParseError(cur.peek().span, "base dimension name", _describe(cur.peek()))
        cur.expect_eof()
        self.spec = ModelSpec(DimensionSystem(names), source=self.text, name=self.name)

    def _var(self, cur: _Cursor):
        cur.next()
        name_tok = cur.expect_kind("name", "variable name")
        cur.expect(":")
        if cur.peek().kind == "name" and cur.peek().value == "infer" and cur.peek(1).kind == "eof":
            cur.next()
            dim = INFER
        else:
            dim = _dimexpr(cur, self.spec.system)
        cur.expect_eof()
        self.spec.vars[self._declare(name_tok)] = dim

    def _param(self, cur: _Cursor):
        cur.next()
        name_tok = cur.expect_kind("name", "parameter name")
        cur.expect(":")
        dim = _dimexpr(cur, self.spec.system)
        value = None
        if cur.at("="):
            cur.next()
            value = _rational(cur)
        cur.expect_eof()
        self.spec.params[self._declare(name_tok)] = Param(dim, value)

    def _fn(self, cur: _Cursor):
        cur.next()
        name_tok = cur.expect_kind("name", "function name")
        if cur.peek().kind == "name" and cur.peek().value == "transcendental":
            cur.next()
            cur.expect("(")
            ar_tok = cur.expect_kind("num", "arity")
            if not ar_tok.value.isdigit() or int(ar_tok.value) < 1:
                raise ParseError(ar_tok.span, "positive integer arity", _describe(ar_tok))
            cur.expect(")")
            cur.expect_eof()
            sig = FuncSig(name_tok.value, int(ar_tok.value), "transcendental")
        else:
            cur.expect("(", "'(' or 'transcendental'")
            args = [_dimexpr(cur, self.spec.system)]
            while cur.at(","):
                cur.next()
                args.append(_dimexpr(cur, self.spec.system))
            cur.expect(")")
            cur.expect("->")
            result = _dimexpr(cur, self.spec.system)
            cur.expect_eof()
            sig = FuncSig(name_tok.value, len(args), "declared", tuple(args), result)
        self.spec.funcs[self._declare(name_tok)] = sig

    def _eq(self, cur: _Cursor, lineno: int):
        cur.next()
        name_tok = cur.expect_kind("name", "equation name")
        if name_tok.value in self.eq_names:
            raise DuplicateName(name_tok.value, name_tok.span)
        self.eq_names.add(name_tok.value)
        cur.expect(":")
        parser = _ExprParser(cur, self.spec)
        lhs = parser.sum()
        cur.expect("=")
        rhs = parser.sum()
        cur.expect_eof()
        self.spec.eqs.append(Equation(name_tok.value, lhs, rhs, lineno))


def parse_model(text: str, name: str = "<model>") -> ModelSpec:
    return _ModelReader(text, name).read()


# --------------------------------------------------------------------------
# printer
# --------------------------------------------------------------------------


def _format_num(v: Fraction) -> str:
    if v.denominator == 1:
        return str(v.numerator)
    den = v.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1 or v < 0:
        # not reachable from parsed input
        return f"({v.numerator}/{v.denominator})"
    k = max(twos, fives)
    digits = str(v.numerator * 10**k // v.denominator).rjust(k + 1, "0")
    return f"{digits[:-k]}.{digits[-k:]}"


def _format_exponent(e: Fraction | str) -> str:
    if isinstance(e, str):
        return e
    if e.denominator == 1 and e >= 0:
        return str(e.numerator)
    if e.denominator == 1:
        return f"({e.numerator})"
    return f"({e.numerator}/{e.denominator})"


_ATOMIC = (Num, Var, Call, Der, Integ)


def _fmt(e: Expr, term_pos: bool) -> str:
    """``term_pos`` is true where a leading '-' binds a whole product."""
    if isinstance(e, Num):
        return _format_num(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Add):
        first = e.terms[0]
        parts = [_paren(_fmt(first, True)) if isinstance(first, Add) else _fmt(first, True)]
        for t in e.terms[1:]:
            parts.append(_paren(_fmt(t, True)) if isinstance(t, (Add, Sub)) else _fmt(t, True))
        return " + ".join(parts)
    if isinstance(e, Sub):
        left = _fmt(e.left, True)
        right = _fmt(e.right, True)
        if isinstance(e.right, (Add, Sub)):
            right = _paren(right)
        return f"{left} - {right}"
    if isinstance(e, Neg):
        op = e.operand
        if isinstance(op, (Add, Sub)) or (not term_pos and isinstance(op, (Mul, Div))):
            return "-" + _paren(_fmt(op, True))
        return "-" + _fmt(op, term_pos)
    if isinstance(e, Mul):
        parts = [_factor(e.factors[0], first=True, allow=(Div,))]
        parts += [_factor(f, first=False, allow=()) for f in e.factors[1:]]
        return " * ".join(parts)
    if isinstance(e, Div):
        left = _factor(e.left, first=True, allow=(Mul, Div))
        right = _factor(e.right, first=False, allow=())
        return f"{left} / {right}"
    if isinstance(e, Pow):
        base = _fmt(e.base, True)
        if not isinstance(e.base, _ATOMIC):
            base = _paren(base)
        return f"{base}^{_format_exponent(e.exponent)}"
    if isinstance(e, Der):
        return f"der({_fmt(e.operand, True)})"
    if isinstance(e, Integ):
        return f"integ({_fmt(e.operand, True)})"
    if isinstance(e, Call):
        return f"{e.fname}({', '.join(_fmt(a, True) for a in e.args)})"
    raise TypeError(f"not an expression node: {e!r}")


def _factor(f: Expr, first: bool, allow: tuple[type, ...]) -> str:
    if isinstance(f, (Add, Sub)):
        return _paren(_fmt(f, True))
    if isinstance(f, (Mul, Div)) and not isinstance(f, allow):
        return _paren(_fmt(f, True))
    if isinstance(f, Neg) and first:
        return _paren(_fmt(f, True))
    return _fmt(f, False)


def _paren(s: str) -> str:
    return f"({s})"


def format_expr(e: Expr) -> str:
    """Canonical text that parses back to a structurally equal tree."""
    return _fmt(e, True)


def format_equation(eq: Equation) -> str:
    return f"eq {eq.name}: {format_expr(eq.lhs)} = {format_expr(eq.rhs)}"


def map_expr(e: Expr, fn: Callable[[Expr], Expr | None]) -> Expr:
    """Rebuild ``e`` bottom-up, replacing any node for which ``fn`` returns non-None."""
    hit = fn(e)
    if hit is not None:
        return hit
    if isinstance(e, Add):
        return Add(tuple(map_expr(t, fn) for t in e.terms), span=e.span)
    if isinstance(e, Mul):
        return Mul(tuple(map_expr(t, fn) for t in e.factors), span=e.span)
    if isinstance(e, (Sub, Div)):
        return type(e)(map_expr(e.left, fn), map_expr(e.right, fn), span=e.span)
    if isinstance(e, (Neg, Der, Integ)):
        return type(e)(map_expr(e.operand, fn), span=e.span)
    if isinstance(e, Pow):
        return Pow(map_expr(e.base, fn), e.exponent, span=e.span)
    if isinstance(e, Call):
        return Call(e.fname, tuple(map_expr(a, fn) for a in e.args), span=e.span)
    return e
