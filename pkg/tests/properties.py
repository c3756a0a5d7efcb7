"""Property bodies shared by the module suites and the acceptance run.

Each entry pairs a plain check function with the strategies that feed it, so
the same property can run under different example budgets.
"""

import pytest
from hypothesis import assume
from hypothesis import strategies as st

from dimcheck.dimcore import NonEquidimensional, quantity_add
from dimcheck.eqdsl import Mul, Num, Pow, Var, format_expr, parse_expr, walk
from dimcheck.homcheck import DimensionViolation, check_equation, infer_dimension
from strategies import ENV, SPEC, SYSTEM, dimensions, exponents, exprs, quantities, replace_at


def group_laws(a, b, c, p, q):
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * SYSTEM.one == a
    assert (a * a.inverse()) == SYSTEM.one
    assert (a**p) ** q == a ** (p * q)
    assert a**0 == SYSTEM.one


def add_iff_equidimensional(a, b):
    if a.dim == b.dim:
        assert quantity_add(a, b).dim == a.dim
    else:
        with pytest.raises(NonEquidimensional):
            quantity_add(a, b)


def parser_roundtrip(e):
    assert parse_expr(format_expr(e), SPEC) == e


def _verdict(lhs, rhs):
    return check_equation("p", lhs, rhs, ENV)


def verdict_symmetry(lhs, rhs):
    a, b = _verdict(lhs, rhs), _verdict(rhs, lhs)
    assert a.homogeneous == b.homogeneous
    assert len(a.violations) == len(b.violations)


def _is_zero(e):
    return isinstance(e, Num) and e.value == 0


def _clean(e):
    try:
        return infer_dimension(e, ENV)
    except DimensionViolation:
        return None


def _clean_nodes(e):
    """Pre-order (index, node, dimension) for subtrees that infer without violation."""
    out = []
    for i, node in enumerate(walk(e)):
        d = _clean(node)
        if d is not None:
            out.append((i, node, d))
    return out


def substitution_monotonicity(lhs, rhs, pick, other, pick_other, on_left):
    side = lhs if on_left else rhs
    targets = _clean_nodes(side)  # never empty: leaves always infer
    idx, _, want = targets[pick % len(targets)]
    donors = _clean_nodes(other)
    _, donor, have = donors[pick_other % len(donors)]
    # scale the donor by base-unit powers so its dimension matches the target
    ratio = want / have
    factors = [donor]
    for base, unit in (("T", "uT"), ("QK", "uK")):
        ex = ratio.exponent(base)
        if ex:
            factors.append(Pow(Var(unit), ex))
    replacement = factors[0] if len(factors) == 1 else Mul(tuple(factors))
    assert infer_dimension(replacement, ENV) == want
    new_side = replace_at(side, idx, replacement)
    # a bare literal zero side takes any dimension, so it is not a fixed-dimension subexpression
    assume(not _is_zero(side) and not _is_zero(new_side))
    new_lhs, new_rhs = (new_side, rhs) if on_left else (lhs, new_side)
    before, after = _verdict(lhs, rhs), _verdict(new_lhs, new_rhs)
    assert before.homogeneous == after.homogeneous
    assert len(before.violations) == len(after.violations)


PROPERTIES = {
    "dimension group laws": (group_laws, (dimensions, dimensions, dimensions, exponents, exponents)),
    "add defined iff equidimensional": (add_iff_equidimensional, (quantities, quantities)),
    "parser round-trip": (parser_roundtrip, (exprs,)),
    "verdict symmetry": (verdict_symmetry, (exprs, exprs)),
    "substitution monotonicity": (
        substitution_monotonicity,
        (exprs, exprs, st.integers(min_value=0), exprs, st.integers(min_value=0), st.booleans()),
    ),
}
