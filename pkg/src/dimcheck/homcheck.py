"""Dimension inference and homogeneity checking over parsed models.

Every additive group (the flattened terms of a chain of ``+``/``-``) must be
equidimensional.  When it is not, the group's reference dimension is the one
shared by the most terms (ties go to the leftmost), each disagreeing term is
reported, and inference continues with the reference so a single pass can
surface several independent problems.  An equation is checked as one
additive group spanning both sides.
"""

from __future__ import annotations

import json
import os
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Mapping, Sequence

from . import ratlinalg
from .dimcore import Dimension, DimensionSystem, format_dimension
from .eqdsl import (
    BUILTIN_TRANSCENDENTAL,
    INFER,
    TIME_BASE,
    TIME_VAR,
    Add,
    Call,
    Der,
    Div,
    Equation,
    Expr,
    FuncSig,
    Integ,
    ModelSpec,
    Mul,
    Neg,
    Num,
    Pow,
    Span,
    Sub,
    Var,
)


class Rule(str, Enum):
    ADDITION_MISMATCH = "AdditionMismatch"
    EQUALITY_MISMATCH = "EqualityMismatch"
    TRANSCENDENTAL_ARG = "TranscendentalArgNotDimensionless"
    EXPONENT = "ExponentNotDimensionless"
    ARGUMENT_MISMATCH = "ArgumentMismatch"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Violation:
    equation: str | None
    span: Span | None
    rule: Rule
    expected: Dimension
    found: Dimension

    def to_json(self) -> dict:
        return {
            "rule": self.rule.value,
            "span": self.span.to_json() if self.span else None,
            "expected": format_dimension(self.expected),
            "found": format_dimension(self.found),
        }


class DimensionViolation(Exception):
    def __init__(self, violation: Violation):
        v = violation
        where = f"line {v.span.line}, col {v.span.cs}: " if v.span else ""
        super().__init__(f"{where}{v.rule.value}: expected {v.expected}, found {v.found}")
        self.violation = violation


class UndeclaredIdentifier(KeyError):
    pass


class UnsolvableInference(Exception):
    def __init__(self, kind: str, names: Sequence[str], equation: str | None = None):
        detail = f" (witness equation {equation!r})" if equation else ""
        super().__init__(f"{kind} dimension inference for {', '.join(names)}{detail}")
        self.kind = kind
        self.names = list(names)
        self.equation = equation


@dataclass(frozen=True)
class Env:
    system: DimensionSystem
    dims: Mapping[str, Dimension]
    funcs: Mapping[str, FuncSig] = field(default_factory=dict)
    param_values: Mapping[str, Fraction] = field(default_factory=dict)
    time_base: str = TIME_BASE

    @classmethod
    def from_spec(cls, spec: ModelSpec, solved: Mapping[str, Dimension] | None = None) -> "Env":
        solved = solved or {}
        dims: dict[str, Dimension] = {}
        for name, d in spec.vars.items():
            if d is INFER:
                if name not in solved:
                    raise UnsolvableInference("unresolved", [name])
                dims[name] = solved[name]
            else:
                dims[name] = d
        values = {}
        for name, p in spec.params.items():
            dims[name] = p.dim
            if p.value is not None:
                values[name] = p.value
        if spec.has_time:
            dims[TIME_VAR] = spec.system.base(TIME_BASE)
        funcs = {n: spec.function(n) for n in spec.funcs}
        return cls(spec.system, dims, funcs, values)

    def lookup(self, name: str) -> Dimension:
        try:
            return self.dims[name]
        except KeyError:
            raise UndeclaredIdentifier(name) from None

    def function(self, name: str) -> FuncSig:
        if name in self.funcs:
            return self.funcs[name]
        if name in BUILTIN_TRANSCENDENTAL:
            return FuncSig(name, 1, "transcendental")
        raise UndeclaredIdentifier(name)

    @property
    def time(self) -> Dimension:
        return self.system.base(self.time_base)


def additive_terms(e: Expr) -> list[Expr]:
    """Flatten nested sums/differences (and negations of them) into their terms."""
    if isinstance(e, Add):
        return [t for x in e.terms for t in additive_terms(x)]
    if isinstance(e, Sub):
        return additive_terms(e.left) + additive_terms(e.right)
    if isinstance(e, Neg) and isinstance(e.operand, (Add, Sub, Neg)):
        return additive_terms(e.operand)
    return [e]


def _reference(dims: Sequence[Dimension]) -> Dimension:
    counts = Counter(dims)
    best = max(counts.values())
    return next(d for d in dims if counts[d] == best)


class _Inferer:
    def __init__(self, env: Env, equation: str | None, collect: bool):
        self.env = env
        self.equation = equation
        self.collect = collect
        self.violations: list[Violation] = []

    def report(self, span, rule, expected, found):
        v = Violation(self.equation, span, rule, expected, found)
        if not self.collect:
            raise DimensionViolation(v)
        self.violations.append(v)

    def group(self, terms: Sequence[Expr], rules: Sequence[Rule] | None = None) -> Dimension:
        dims = [self.infer(t) for t in terms]
        ref = _reference(dims)
        for i, (t, d) in enumerate(zip(terms, dims)):
            if d != ref:
                self.report(t.span, rules[i] if rules else Rule.ADDITION_MISMATCH, ref, d)
        return ref

    def infer(self, e: Expr) -> Dimension:
        env = self.env
        if isinstance(e, Num):
            return env.system.one
        if isinstance(e, Var):
            return env.lookup(e.name)
        if isinstance(e, (Add, Sub)):
            return self.group(additive_terms(e))
        if isinstance(e, Neg):
            return self.infer(e.operand)
        if isinstance(e, Mul):
            d = env.system.one
            for f in e.factors:
                d = d * self.infer(f)
            return d
        if isinstance(e, Div):
            return self.infer(e.left) / self.infer(e.right)
        if isinstance(e, Pow):
            return self.power(e)
        if isinstance(e, Der):
            return self.infer(e.operand) / env.time
        if isinstance(e, Integ):
            return self.infer(e.operand) * env.time
        if isinstance(e, Call):
            return self.call(e)
        raise TypeError(f"not an expression node: {e!r}")

    def power(self, e: Pow) -> Dimension:
        base = self.infer(e.base)
        one = self.env.system.one
        if isinstance(e.exponent, Fraction):
            return base ** e.exponent
        name = e.exponent
        edim = self.env.lookup(name)
        if edim != one:
            self.report(e.span, Rule.EXPONENT, one, edim)
            return base
        if name in self.env.param_values:
            return base ** self.env.param_values[name]
        # exponent is dimensionless but not statically known
        if base != one:
            self.report(e.span, Rule.EXPONENT, one, base)
            return base
        return one

    def call(self, e: Call) -> Dimension:
        sig = self.env.function(e.fname)
        one = self.env.system.one
        if sig.kind == "transcendental":
            for a in e.args:
                d = self.infer(a)
                if d != one:
                    self.report(a.span, Rule.TRANSCENDENTAL_ARG, one, d)
            return one
        for a, want in zip(e.args, sig.arg_dims):
            d = self.infer(a)
            if d != want:
                self.report(a.span, Rule.ARGUMENT_MISMATCH, want, d)
        return sig.result_dim


def infer_dimension(e: Expr, env: Env) -> Dimension:
    """Dimension of ``e``; raises :class:`DimensionViolation` on the first failure."""
    return _Inferer(env, None, collect=False).infer(e)


@dataclass(frozen=True)
class Verdict:
    name: str
    violations: tuple[Violation, ...]
    lhs_dim: Dimension | None
    rhs_dim: Dimension | None
    line: int = 0

    @property
    def homogeneous(self) -> bool:
        return not self.violations

    @property
    def status(self) -> str:
        return "Homogeneous" if self.homogeneous else "Inhomogeneous"

    @property
    def dimension(self) -> Dimension | None:
        return self.lhs_dim if self.homogeneous else None

    def to_json(self) -> dict:
        out = {"name": self.name, "verdict": self.status, "violations": [v.to_json() for v in self.violations]}
        if self.homogeneous and self.lhs_dim is not None:
            out["dimension"] = format_dimension(self.lhs_dim)
        return out


def _is_zero(e: Expr) -> bool:
    return isinstance(e, Num) and e.value == 0


def check_equation(name: str, lhs: Expr, rhs: Expr, env: Env, line: int = 0) -> Verdict:
    """Check one equation; a side that is the bare literal ``0`` matches any dimension."""
    inf = _Inferer(env, name, collect=True)
    sides = [s for s in (lhs, rhs) if not _is_zero(s)]
    terms: list[Expr] = []
    rules: list[Rule] = []
    for side in sides:
        side_terms = additive_terms(side)
        rule = Rule.EQUALITY_MISMATCH if len(side_terms) == 1 else Rule.ADDITION_MISMATCH
        terms += side_terms
        rules += [rule] * len(side_terms)
    if not terms:
        one = env.system.one
        return Verdict(name, (), one, one, line)
    ref = inf.group(terms, rules)
    lhs_dim = ref if _is_zero(lhs) else None
    rhs_dim = ref if _is_zero(rhs) else None
    if lhs_dim is None or rhs_dim is None:
        quiet = _Inferer(env, name, collect=True)
        if lhs_dim is None:
            lhs_dim = quiet.infer(lhs)
        if rhs_dim is None:
            rhs_dim = quiet.infer(rhs)
    return Verdict(name, tuple(inf.violations), lhs_dim, rhs_dim, line)


# --------------------------------------------------------------------------
# solving for `infer` dimensions
# --------------------------------------------------------------------------


class _Lin:
    """Affine exponent expression: const vector + sum(coeff * unknown vector)."""

    __slots__ = ("const", "coef")

    def __init__(self, const: tuple[Fraction, ...], coef: dict[str, Fraction] | None = None):
        self.const = const
        self.coef = {k: v for k, v in (coef or {}).items() if v != 0}

    def __add__(self, o: "_Lin") -> "_Lin":
        coef = dict(self.coef)
        for k, v in o.coef.items():
            coef[k] = coef.get(k, 0) + v
        return _Lin(tuple(a + b for a, b in zip(self.const, o.const)), coef)

    def scale(self, s: Fraction) -> "_Lin":
        return _Lin(tuple(a * s for a in self.const), {k: v * s for k, v in self.coef.items()})

    def __sub__(self, o: "_Lin") -> "_Lin":
        return self + o.scale(Fraction(-1))


class _Collector:
    def __init__(self, spec: ModelSpec):
        self.spec = spec
        self.system = spec.system
        self.env_known: dict[str, Dimension] = {}
        for n, d in spec.vars.items():
            if d is not INFER:
                self.env_known[n] = d
        for n, p in spec.params.items():
            self.env_known[n] = p.dim
        if spec.has_time:
            self.env_known[TIME_VAR] = spec.system.base(TIME_BASE)
        self.zero = _Lin(tuple(Fraction(0) for _ in self.system.base_names))
        self.constraints: list[tuple[_Lin, str]] = []
        self.current = ""

    def const(self, d: Dimension) -> _Lin:
        return _Lin(d.vector())

    def need(self, lin: _Lin):
        if lin.coef:
            self.constraints.append((lin, self.current))

    def group(self, terms: Sequence[Expr]) -> _Lin:
        lins = [self.lin(t) for t in terms]
        ref = next((x for x in lins if not x.coef), lins[0])
        for x in lins:
            if x is not ref:
                self.need(x - ref)
        return ref

    def lin(self, e: Expr) -> _Lin:
        if isinstance(e, Num):
            return self.zero
        if isinstance(e, Var):
            if e.name in self.env_known:
                return self.const(self.env_known[e.name])
            return _Lin(self.zero.const, {e.name: Fraction(1)})
        if isinstance(e, (Add, Sub)):
            return self.group(additive_terms(e))
        if isinstance(e, Neg):
            return self.lin(e.operand)
        if isinstance(e, Mul):
            acc = self.zero
            for f in e.factors:
                acc = acc + self.lin(f)
            return acc
        if isinstance(e, Div):
            return self.lin(e.left) - self.lin(e.right)
        if isinstance(e, Der):
            return self.lin(e.operand) - self.const(self.system.base(TIME_BASE))
        if isinstance(e, Integ):
            return self.lin(e.operand) + self.const(self.system.base(TIME_BASE))
        if isinstance(e, Pow):
            base = self.lin(e.base)
            if isinstance(e.exponent, Fraction):
                return base.scale(e.exponent)
            name = e.exponent
            p = self.spec.params.get(name)
            if p is not None and p.value is not None and p.dim.is_dimensionless:
                return base.scale(p.value)
            if self.spec.vars.get(name) is INFER:
                self.need(_Lin(self.zero.const, {name: Fraction(1)}))
            self.need(base)
            return base
        if isinstance(e, Call):
            sig = self.spec.function(e.fname)
            if sig.kind == "transcendental":
                for a in e.args:
                    self.need(self.lin(a))
                return self.zero
            for a, want in zip(e.args, sig.arg_dims):
                self.need(self.lin(a) - self.const(want))
            return self.const(sig.result_dim)
        raise TypeError(f"not an expression node: {e!r}")

    def equation(self, eq: Equation):
        self.current = eq.name
        terms = [t for side in (eq.lhs, eq.rhs) if not _is_zero(side) for t in additive_terms(side)]
        if terms:
            self.group(terms)


def solve_unknown_dimensions(spec: ModelSpec) -> dict[str, Dimension]:
    """Solve the exponent equations for every ``infer`` variable exactly.

    Each constraint ``sum_u a_u x_u = b`` holds per base dimension, so one
    elimination over the unknowns serves all bases at once (the bases ride
    along as right-hand-side columns).
    """
    unknowns = spec.unknowns()
    if not unknowns:
        return {}
    col = {u: i for i, u in enumerate(unknowns)}
    nb = len(spec.system)
    collector = _Collector(spec)
    for eq in spec.eqs:
        collector.equation(eq)

    rows: list[list[Fraction]] = []
    for lin, eqname in collector.constraints:
        row = [Fraction(0)] * len(unknowns)
        for u, a in lin.coef.items():
            row[col[u]] = a
        row += [-c for c in lin.const]
        trial, pivots = ratlinalg.rref(rows + [row], len(unknowns))
        for r in trial[len(pivots):]:
            if any(x != 0 for x in r[len(unknowns):]):
                involved = [u for u in unknowns if lin.coef.get(u)]
                raise UnsolvableInference("inconsistent", involved, eqname)
        rows.append(row)

    m, pivots = ratlinalg.rref(rows, len(unknowns)) if rows else ([], [])
    free = [j for j in range(len(unknowns)) if j not in pivots]
    solved: dict[str, Dimension] = {}
    undetermined = [unknowns[j] for j in free]
    for r, pcol in enumerate(pivots):
        if any(m[r][j] != 0 for j in free):
            undetermined.append(unknowns[pcol])
            continue
        solved[unknowns[pcol]] = spec.system.from_vector(m[r][len(unknowns):len(unknowns) + nb])
    if undetermined:
        undetermined.sort(key=col.get)
        raise UnsolvableInference("underdetermined", undetermined)
    return solved


# --------------------------------------------------------------------------
# dimensionless groups
# --------------------------------------------------------------------------


def dimensionless_groups(variables: Sequence[tuple[str, Dimension]]) -> list[list[int]]:
    """Integer basis of dimensionless products ``prod(var_i ** e_i)``.

    One vector per non-pivot variable in declaration order, scaled to the
    smallest integers with first nonzero entry positive.
    """
    if not variables:
        raise ValueError("need at least one variable")
    system = variables[0][1].system
    cols = [d.vector() for _, d in variables]
    rows = [[cols[j][i] for j in range(len(variables))] for i in range(len(system))]
    rows = [r for r in rows if any(x != 0 for x in r)]
    return ratlinalg.nullspace(rows, len(variables))


def format_group(names: Sequence[str], exps: Sequence[int]) -> str:
    parts = []
    for n, e in zip(names, exps):
        if e == 0:
            continue
        parts.append(n if e == 1 else f"{n}^({e})")
    return "*".join(parts) or "1"


# --------------------------------------------------------------------------
# reports
# --------------------------------------------------------------------------


@dataclass
class Report:
    model: str
    verdicts: list[Verdict]
    inferred: dict[str, Dimension]
    source: str = ""

    @property
    def ok(self) -> bool:
        return all(v.homogeneous for v in self.verdicts)

    @property
    def violations(self) -> list[Violation]:
        return [x for v in self.verdicts for x in v.violations]

    def summary(self) -> dict:
        bad = sum(1 for v in self.verdicts if not v.homogeneous)
        return {
            "equations": len(self.verdicts),
            "homogeneous": len(self.verdicts) - bad,
            "inhomogeneous": bad,
            "violations": len(self.violations),
        }

    def verdict(self, name: str) -> Verdict:
        return next(v for v in self.verdicts if v.name == name)

    def to_json(self) -> dict:
        return {
            "model": self.model,
            "equations": [v.to_json() for v in self.verdicts],
            "inferred": {k: format_dimension(d) for k, d in self.inferred.items()},
            "summary": self.summary(),
        }

    def to_json_text(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    def to_text(self, color: bool | None = None) -> str:
        if color is None:
            color = False
        red, green, dim, reset = ("\x1b[31m", "\x1b[32m", "\x1b[2m", "\x1b[0m") if color else ("",) * 4
        lines = self.source.splitlines()
        out = []
        width = max((len(v.name) for v in self.verdicts), default=0)
        for v in self.verdicts:
            if v.homogeneous:
                out.append(f"{green}ok  {reset} {v.name:<{width}}  [{v.lhs_dim}]")
                continue
            n = len(v.violations)
            out.append(f"{red}FAIL{reset} {v.name:<{width}}  {n} violation{'s' if n != 1 else ''}")
            for x in v.violations:
                loc = f"{self.model}:{x.span.line}:{x.span.cs}" if x.span else self.model
                out.append(f"     {loc}: {x.rule.value}: expected {x.expected}, found {x.found}")
                if x.span and 0 < x.span.line <= len(lines):
                    src = lines[x.span.line - 1]
                    out.append(f"     {dim}|{reset} {src}")
                    out.append(f"     {dim}|{reset} {' ' * x.span.cs}{red}{'^' * max(1, x.span.ce - x.span.cs)}{reset}")
        for name, d in self.inferred.items():
            out.append(f"inferred {name} : {d}")
        s = self.summary()
        out.append(
            f"{s['equations']} equations: {s['homogeneous']} homogeneous, "
            f"{s['inhomogeneous']} inhomogeneous, {s['violations']} violations"
        )
        return "\n".join(out) + "\n"


def color_enabled(stream) -> bool:
    if os.environ.get("DIMCHECK_NO_COLOR"):
        return False
    return hasattr(stream, "isatty") and stream.isatty()


def check_model(spec: ModelSpec) -> Report:
    solved = solve_unknown_dimensions(spec)
    env = Env.from_spec(spec, solved)
    verdicts = [check_equation(eq.name, eq.lhs, eq.rhs, env, eq.line) for eq in spec.eqs]
    return Report(spec.name, verdicts, solved, spec.source)
