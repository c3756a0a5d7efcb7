"""Exact dimension algebra over a declared set of base dimensions.

A :class:`Dimension` is a vector of rational exponents indexed by the base
names of its :class:`DimensionSystem`.  Dimensions form a commutative group
under multiplication; :class:`Quantity` pairs a finite float with a dimension
and only allows addition, subtraction and comparison between equidimensional
operands.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

Rational = Fraction
Number = Union[int, float, Fraction]

_IDENT = re.compile(r"^[^\W\d]\w*$")

#: Default base set for non-monetary/monetary economic models.
ECON_BASES = ("T", "M", "QK", "QL", "QP", "U")


class DimensionError(Exception):
    """Base class for dimension algebra errors."""


class MixedSystems(DimensionError, ValueError):
    def __init__(self, left: "DimensionSystem", right: "DimensionSystem"):
        super().__init__(
            f"dimensions belong to different systems: "
            f"{' '.join(left.base_names)} vs {' '.join(right.base_names)}"
        )
        self.left = left
        self.right = right


class NonEquidimensional(DimensionError, TypeError):
    """Raised when adding, subtracting or comparing quantities of different dimension."""

    def __init__(self, left_dim: "Dimension", right_dim: "Dimension", op: str = "+"):
        super().__init__(f"cannot apply '{op}' to {left_dim} and {right_dim}")
        self.left_dim = left_dim
        self.right_dim = right_dim


class DivisionByZero(DimensionError, ZeroDivisionError):
    pass


class DimensionSyntaxError(DimensionError, ValueError):
    def __init__(self, text: str, pos: int, message: str):
        super().__init__(f"{message} at offset {pos} in {text!r}")
        self.text = text
        self.pos = pos
        self.message = message


def as_rational(x: Number | str) -> Fraction:
    """Convert ints, Fractions, decimal strings and ``p/q`` strings exactly.

    Floats are converted through their shortest repr, so ``0.05`` becomes
    ``1/20`` rather than the binary expansion.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite exponent {x!r}")
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as a rational")


@dataclass(frozen=True)
class DimensionSystem:
    base_names: tuple[str, ...]

    def __init__(self, base_names: Iterable[str]):
        names = tuple(base_names)
        seen = set()
        for name in names:
            if not isinstance(name, str) or not _IDENT.match(name):
                raise ValueError(f"invalid base dimension name {name!r}")
            if name in seen:
                raise ValueError(f"duplicate base dimension {name!r}")
            seen.add(name)
        object.__setattr__(self, "base_names", names)

    def __contains__(self, name: str) -> bool:
        return name in self.base_names

    def __len__(self) -> int:
        return len(self.base_names)

    @property
    def one(self) -> "Dimension":
        return Dimension(self, ())

    def base(self, name: str) -> "Dimension":
        if name not in self.base_names:
            raise KeyError(f"unknown base dimension {name!r}")
        return Dimension(self, ((name, Fraction(1)),))

    def dimension(self, exponents: Mapping[str, Number | str] | None = None, **kw) -> "Dimension":
        merged = dict(exponents or {})
        merged.update(kw)
        return Dimension.from_map(self, merged)

    def from_vector(self, vec: Iterable[Number]) -> "Dimension":
        vec = list(vec)
        if len(vec) != len(self.base_names):
            raise ValueError("exponent vector length does not match the base set")
        return Dimension.from_map(self, dict(zip(self.base_names, vec)))

    def parse(self, text: str) -> "Dimension":
        """Parse ``1``, ``QK/(QP*T)``, ``QK^(2/3)*T^(-1)`` and the like."""
        return _DimParser(self, text).parse()


@dataclass(frozen=True)
class Dimension:
    """Element of the dimension group of ``system``.

    ``items`` holds the nonzero exponents in base-declaration order; the empty
    tuple is the neutral element.
    """

    system: DimensionSystem
    items: tuple[tuple[str, Fraction], ...]

    @classmethod
    def from_map(cls, system: DimensionSystem, exponents: Mapping[str, Number | str]) -> "Dimension":
        for name in exponents:
            if name not in system:
                raise KeyError(f"unknown base dimension {name!r}")
        items = []
        for name in system.base_names:
            if name in exponents:
                e = as_rational(exponents[name])
                if e != 0:
                    items.append((name, e))
        return cls(system, tuple(items))

    @property
    def exponents(self) -> dict[str, Fraction]:
        return dict(self.items)

    def exponent(self, name: str) -> Fraction:
        if name not in self.system:
            raise KeyError(f"unknown base dimension {name!r}")
        return self.exponents.get(name, Fraction(0))

    def vector(self) -> tuple[Fraction, ...]:
        exps = self.exponents
        return tuple(exps.get(n, Fraction(0)) for n in self.system.base_names)

    @property
    def is_dimensionless(self) -> bool:
        return not self.items

    def __mul__(self, other: "Dimension") -> "Dimension":
        if not isinstance(other, Dimension):
            return NotImplemented
        return dim_mul(self, other)

    def __truediv__(self, other: "Dimension") -> "Dimension":
        if not isinstance(other, Dimension):
            return NotImplemented
        return dim_mul(self, dim_pow(other, -1))

    def __pow__(self, e: Number | str) -> "Dimension":
        return dim_pow(self, e)

    def inverse(self) -> "Dimension":
        return dim_pow(self, -1)

    def __str__(self) -> str:
        return format_dimension(self)

    def __repr__(self) -> str:
        return f"Dimension({format_dimension(self)!r})"


def dim_mul(a: Dimension, b: Dimension) -> Dimension:
    if a.system != b.system:
        raise MixedSystems(a.system, b.system)
    acc = a.exponents
    for name, e in b.items:
        acc[name] = acc.get(name, Fraction(0)) + e
    return Dimension.from_map(a.system, acc)


def dim_pow(a: Dimension, e: Number | str) -> Dimension:
    e = as_rational(e)
    return Dimension.from_map(a.system, {n: x * e for n, x in a.items})


def is_dimensionless(a: Dimension) -> bool:
    return not a.items


def _format_exponent(e: Fraction) -> str:
    if e.denominator == 1:
        return str(e.numerator)
    return f"{e.numerator}/{e.denominator}"


def format_dimension(d: Dimension) -> str:
    """Canonical text: ``QK^(2/3)*QP^(-2/3)*T^(-1)``; ``1`` for the neutral element."""
    if not d.items:
        return "1"
    parts = []
    for name, e in d.items:
        parts.append(name if e == 1 else f"{name}^({_format_exponent(e)})")
    return "*".join(parts)


class _DimParser:
    # dimexpr := term (('*' | '/') term)*
    # term    := '1' | NAME ['^' exponent] | '(' dimexpr ')' ['^' exponent]
    _TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[^\W\d]\w*)|(?P<op>[*/^()\-]))")

    def __init__(self, system: DimensionSystem, text: str):
        self.system = system
        self.text = text
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        stripped = text.rstrip()
        while pos < len(stripped):
            m = self._TOKEN.match(stripped, pos)
            if not m:
                raise DimensionSyntaxError(text, pos, "unexpected character")
            kind = m.lastgroup
            self.tokens.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.i = 0

    def _peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("eof", "", len(self.text))

    def _take(self, value: str | None = None, kind: str | None = None):
        tok = self._peek()
        if (value is not None and tok[1] != value) or (kind is not None and tok[0] != kind):
            want = value or kind
            raise DimensionSyntaxError(self.text, tok[2], f"expected {want!r}, found {tok[1] or 'end'!r}")
        self.i += 1
        return tok

    def parse(self) -> Dimension:
        d = self._expr()
        if self._peek()[0] != "eof":
            tok = self._peek()
            raise DimensionSyntaxError(self.text, tok[2], f"unexpected {tok[1]!r}")
        return d

    def _expr(self) -> Dimension:
        d = self._term()
        while self._peek()[1] in ("*", "/"):
            op = self._take()[1]
            rhs = self._term()
            d = d * rhs if op == "*" else d / rhs
        return d

    def _term(self) -> Dimension:
        kind, value, pos = self._peek()
        if kind == "num":
            self.i += 1
            if value != "1":
                raise DimensionSyntaxError(self.text, pos, "only the literal 1 may appear in a dimension")
            return self.system.one
        if kind == "name":
            self.i += 1
            if value not in self.system:
                raise DimensionSyntaxError(self.text, pos, f"unknown base dimension {value!r}")
            d = self.system.base(value)
        elif value == "(":
            self.i += 1
            d = self._expr()
            self._take(")")
        else:
            raise DimensionSyntaxError(self.text, pos, f"expected a base dimension, found {value or 'end'!r}")
        if self._peek()[1] == "^":
            self.i += 1
            d = d ** self._exponent()
        return d

    def _exponent(self) -> Fraction:
        paren = self._peek()[1] == "("
        if paren:
            self.i += 1
        sign = 1
        if self._peek()[1] == "-":
            self.i += 1
            sign = -1
        num = int(self._take(kind="num")[1])
        den = 1
        if paren and self._peek()[1] == "/":
            self.i += 1
            tok = self._take(kind="num")
            den = int(tok[1])
            if den == 0:
                raise DimensionSyntaxError(self.text, tok[2], "zero denominator")
        if paren:
            self._take(")")
        return Fraction(sign * num, den)


def _check_finite(value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"quantity value must be finite, got {value!r}")
    return value


@dataclass(frozen=True, eq=False)
class Quantity:
    """A finite numeric value carrying a dimension.

    Comparisons between quantities of different dimension raise
    :class:`NonEquidimensional` instead of returning ``False``.
    """

    value: float
    dim: Dimension

    def __post_init__(self):
        object.__setattr__(self, "value", _check_finite(self.value))

    def _coerce(self, other) -> "Quantity":
        if isinstance(other, Quantity):
            return other
        if isinstance(other, (int, float, Fraction)) and not isinstance(other, bool):
            return Quantity(float(other), self.dim.system.one)
        raise TypeError(f"unsupported operand {other!r}")

    def __add__(self, other):
        return quantity_add(self, self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return quantity_add(self, -self._coerce(other), op="-")

    def __rsub__(self, other):
        return quantity_add(self._coerce(other), -self, op="-")

    def __neg__(self):
        return Quantity(-self.value, self.dim)

    def __mul__(self, other):
        return quantity_mul(self, self._coerce(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return quantity_div(self, self._coerce(other))

    def __rtruediv__(self, other):
        return quantity_div(self._coerce(other), self)

    def __pow__(self, e: Number | str):
        e = as_rational(e)
        return Quantity(self.value ** float(e), dim_pow(self.dim, e))

    def _cmp(self, other, op):
        other = self._coerce(other)
        if self.dim != other.dim:
            raise NonEquidimensional(self.dim, other.dim, op)
        return self.value, other.value

    def __eq__(self, other):
        if not isinstance(other, Quantity):
            return NotImplemented
        a, b = self._cmp(other, "==")
        return a == b

    def __ne__(self, other):
        if not isinstance(other, Quantity):
            return NotImplemented
        a, b = self._cmp(other, "!=")
        return a != b

    def __lt__(self, other):
        a, b = self._cmp(other, "<")
        return a < b

    def __le__(self, other):
        a, b = self._cmp(other, "<=")
        return a <= b

    def __gt__(self, other):
        a, b = self._cmp(other, ">")
        return a > b

    def __ge__(self, other):
        a, b = self._cmp(other, ">=")
        return a >= b

    def __hash__(self):
        return hash((self.value, self.dim))

    def __repr__(self):
        return f"Quantity({self.value!r}, {format_dimension(self.dim)!r})"


def quantity_add(a: Quantity, b: Quantity, op: str = "+") -> Quantity:
    if a.dim.system != b.dim.system:
        raise MixedSystems(a.dim.system, b.dim.system)
    if a.dim != b.dim:
        raise NonEquidimensional(a.dim, b.dim, op)
    return Quantity(a.value + b.value, a.dim)


def quantity_mul(a: Quantity, b: Quantity) -> Quantity:
    return Quantity(a.value * b.value, dim_mul(a.dim, b.dim))


def quantity_div(a: Quantity, b: Quantity) -> Quantity:
    if b.value == 0:
        raise DivisionByZero("division by a zero-valued quantity")
    return Quantity(a.value / b.value, dim_mul(a.dim, dim_pow(b.dim, -1)))
