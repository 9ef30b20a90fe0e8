from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from catblocks.exactalg import (
    FormalSum,
    LaurentScalar,
    LinearOp,
    MultiLaurent,
    NotPolynomial,
    RationalFn,
    divide_exact,
    quantum_integer,
    rational_reduce_to_laurent,
)

NAMES = ("t1", "t2", "q")

scalars = st.dictionaries(st.integers(-4, 4), st.integers(-5, 5), max_size=4).map(LaurentScalar)
multis = st.dictionaries(st.tuples(*[st.integers(-2, 2)] * 3), st.integers(-3, 3),
                         max_size=4).map(lambda d: MultiLaurent(3, d, NAMES))
points = st.tuples(*[st.sampled_from([Fraction(2), Fraction(-3), Fraction(1, 2), Fraction(5, 3)])] * 3)


def t(i, power=1):
    return MultiLaurent.variable(3, i, power, NAMES)


def test_quantum_integers():
    assert quantum_integer(0) == LaurentScalar()
    assert quantum_integer(2) == LaurentScalar({1: 1, -1: 1})
    assert quantum_integer(3) == LaurentScalar({2: 1, 0: 1, -2: 1})
    assert quantum_integer(-2) == -quantum_integer(2)
    assert str(quantum_integer(3)) == "q^2 + 1 + q^-2"


@given(scalars, scalars, scalars)
def test_laurent_scalar_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == LaurentScalar()


@given(scalars, scalars)
def test_laurent_scalar_evaluation_is_a_homomorphism(a, b):
    x = Fraction(3, 2)
    assert (a * b).evaluate(x) == a.evaluate(x) * b.evaluate(x)
    assert (a + b).evaluate(x) == a.evaluate(x) + b.evaluate(x)


@given(multis, multis, multis)
@settings(max_examples=60)
def test_multi_laurent_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a


@given(multis, multis, points)
@settings(max_examples=60)
def test_multi_laurent_evaluation(a, b, pt):
    vals = dict(enumerate(pt))
    assert (a * b).evaluate(vals) == a.evaluate(vals) * b.evaluate(vals)


@given(multis, multis)
@settings(max_examples=60)
def test_divide_exact_recovers_factor(a, b):
    if not b:
        return
    assert divide_exact(a * b, b) == a


def test_reduce_examples():
    one = MultiLaurent.constant(3, 1, NAMES)
    assert rational_reduce_to_laurent(RationalFn(one - t(0, 2), [one - t(0)])) == one + t(0)
    assert rational_reduce_to_laurent(RationalFn(t(0) - t(1), [t(0) - t(1)])) == one


def test_reduce_raises_on_pole():
    one = MultiLaurent.constant(3, 1, NAMES)
    num = one - t(2, 2) * t(0) * t(1, -1)
    den = one - t(1) * t(0, -1)
    with pytest.raises(NotPolynomial):
        rational_reduce_to_laurent(RationalFn(num, [den]))


def test_rational_sums_share_factors():
    one = MultiLaurent.constant(3, 1, NAMES)
    a = RationalFn(one, [one - t(0)])
    b = RationalFn(t(0), [one - t(0)])
    assert a + b == RationalFn(one + t(0), [one - t(0)])
    assert a - a == RationalFn(MultiLaurent(3, {}, NAMES))
    # 1/(1-x) + 1/(1-1/x) = 1
    c = RationalFn(one, [one - t(0, -1)])
    assert rational_reduce_to_laurent(a + c) == one


@given(multis, points)
@settings(max_examples=40)
def test_substitute_matches_evaluation(a, pt):
    img = {0: t(1) * t(2)}
    vals = dict(enumerate(pt))
    lhs = a.substitute(img).evaluate(vals)
    rhs = a.evaluate({0: pt[1] * pt[2], 1: pt[1], 2: pt[2]})
    assert lhs == rhs


def test_formal_sum_and_linear_op():
    v = FormalSum({"a": 2, "b": -1})
    assert v - v == 0
    assert (v + FormalSum.basis("a")).to_json() == {"a": "3", "b": "-1"}
    op = LinearOp({"a": FormalSum({"b": 1}), "b": FormalSum({"a": 1})}, ["a", "b"], ["a", "b"])
    assert op(v) == FormalSum({"b": 2, "a": -1})
    assert op @ op == LinearOp.identity(["a", "b"])
