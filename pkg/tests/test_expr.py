import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from snmsurf import jets
from snmsurf.expr import (
    Add, Call, Div, ExpressionSyntaxError, Mul, Neg, Num, Pow, Sub, UnknownIdentifierError, Var,
    eval_jet, eval_jet_fd_check, eval_value, parse_expression, to_text,
)
from snmsurf.jets import DomainError, Jet3, NonFiniteError, compose

X = Var("x")


def test_parse_power():
    assert parse_expression("x^2") == Pow(X, Num(2.0))


def test_parse_nested_calls():
    assert parse_expression("log(cos(x))") == Call("log", Call("cos", X))


def test_no_simplification():
    assert parse_expression("(1+0)*x") == Mul(Add(Num(1.0), Num(0.0)), X)


@pytest.mark.parametrize("text,tree", [
    ("-x^2", Neg(Pow(X, Num(2.0)))),
    ("2^3^2", Pow(Num(2.0), Pow(Num(3.0), Num(2.0)))),
    ("x^-1", Pow(X, Neg(Num(1.0)))),
    ("1 - 2 - x", Sub(Sub(Num(1.0), Num(2.0)), X)),
    ("x / 2 * 3", Mul(Div(X, Num(2.0)), Num(3.0))),
    ("1.5e-3*y", Mul(Num(1.5e-3), Var("y"))),
])
def test_precedence(text, tree):
    assert parse_expression(text) == tree


@pytest.mark.parametrize("text,offset", [
    ("x^", 2),
    ("(x + 1", 6),
    ("x + * 2", 4),
    ("2 $ x", 2),
    ("sin(x))", 6),
])
def test_syntax_errors_report_offset(text, offset):
    with pytest.raises(ExpressionSyntaxError) as info:
        parse_expression(text)
    assert info.value.offset == offset
    assert f"offset {offset}" in str(info.value)


def test_offsets_are_bytes():
    with pytest.raises(ExpressionSyntaxError) as info:
        parse_expression("x + é")
    assert info.value.offset == 4
    with pytest.raises(ExpressionSyntaxError) as info:
        parse_expression("éé $")
    assert info.value.offset == 0


def test_unknown_identifier():
    with pytest.raises(UnknownIdentifierError) as info:
        parse_expression("x + foo(x)")
    assert info.value.offset == 4


def test_mixed_variables_rejected():
    with pytest.raises(ExpressionSyntaxError):
        parse_expression("x + y")
    assert parse_expression("z^2").variable_names() == frozenset("z")


def test_eval_examples():
    assert eval_jet(Call("exp", X), 0.0).as_tuple() == (1.0, 1.0, 1.0, 1.0)
    assert eval_jet(parse_expression("log(cos(x))"), 0.0).as_tuple() == (0.0, 0.0, -1.0, 0.0)
    assert eval_jet(parse_expression("x^2"), 3.0).as_tuple() == (9.0, 6.0, 2.0, 0.0)


def test_eval_constant_expression_gives_constant_jet():
    assert eval_jet(parse_expression("2*3"), 1.0).as_tuple() == (6.0, 0.0, 0.0, 0.0)


def test_eval_errors():
    with pytest.raises(DomainError):
        eval_jet(parse_expression("log(x)"), -1.0)
    with pytest.raises(DomainError):
        eval_jet(parse_expression("1/x"), 0.0)
    with pytest.raises(DomainError):
        eval_jet(parse_expression("x^0.5"), -2.0)
    with pytest.raises(NonFiniteError):
        eval_jet(parse_expression("exp(x)^100"), 100.0)


def test_variable_exponent():
    j = eval_jet(parse_expression("x^x"), 2.0)
    assert math.isclose(j.v0, 4.0)
    assert math.isclose(j.v1, 4.0 * (math.log(2.0) + 1.0))


def test_fd_check_sin():
    d = eval_jet_fd_check(Call("sin", X), 0.3, h=1e-4)
    for got, want in zip(d, (math.cos(0.3), -math.sin(0.3), -math.cos(0.3))):
        assert abs(got - want) <= 1e-6


def test_fd_check_cubic():
    d = eval_jet_fd_check(parse_expression("x^3"), 1.0, h=1e-3)
    for got, want in zip(d, (3.0, 6.0, 6.0)):
        assert abs(got - want) <= 1e-6


def test_fd_check_exp():
    d = eval_jet_fd_check(Call("exp", X), 0.0, h=1e-4)
    for got in d:
        assert abs(got - 1.0) <= 1e-5


def _stencil_weights(offsets, order):
    """Finite-difference weights from the Vandermonde moment system."""
    offsets = np.asarray(offsets, dtype=float)
    n = len(offsets)
    A = np.vander(offsets, n, increasing=True).T
    rhs = np.zeros(n)
    rhs[order] = math.factorial(order)
    return np.linalg.solve(A, rhs)


@pytest.mark.parametrize("order,offsets", [(1, range(-3, 4)), (2, range(-3, 4)),
                                           (3, [-3, -2, -1, 1, 2, 3])])
def test_stencils_match_moment_solution(order, offsets):
    # apply both stencils to a function with nonzero high derivatives
    e = parse_expression("exp(x/2)*sin(x)")
    h = 0.05 if order < 3 else 0.1
    w = _stencil_weights(list(offsets), order)
    vals = [eval_value(e, 0.4 + k * h) for k in offsets]
    reference = float(np.dot(w, vals)) / h ** order
    got = eval_jet_fd_check(e, 0.4, h=h, h3=h)[order - 1]
    assert abs(got - reference) <= 1e-9 * max(1.0, abs(reference))


def test_stencils_exact_on_sextics():
    e = parse_expression("x^6 - 2*x^5 + x^3")
    exact = eval_jet(e, 0.7)
    got = eval_jet_fd_check(e, 0.7, h=0.1, h3=0.1)
    for g, w in zip(got, (exact.v1, exact.v2, exact.v3)):
        assert abs(g - w) <= 1e-9


def _random_poly(rng, degree):
    coeffs = rng.uniform(-1, 1, degree + 1)
    out = Num(float(abs(coeffs[0])))
    for k in range(1, degree + 1):
        c = float(coeffs[k])
        term = Mul(Num(abs(c)), Pow(X, Num(float(k))))
        out = Add(out, term) if c >= 0 else Sub(out, term)
    return out


def test_random_polynomials_against_finite_differences():
    rng = np.random.default_rng(2024)
    worst = [0.0, 0.0, 0.0]
    for _ in range(1000):
        e = _random_poly(rng, int(rng.integers(0, 7)))
        x = float(rng.uniform(-2, 2))
        j = eval_jet(e, x)
        fd = eval_jet_fd_check(e, x)
        for k, (exact, approx) in enumerate(zip((j.v1, j.v2, j.v3), fd)):
            worst[k] = max(worst[k], abs(exact - approx) / max(1.0, abs(exact)))
    assert worst[0] <= 1e-5 and worst[1] <= 1e-5
    assert worst[2] <= 1e-3


# round trip

leaf = st.one_of(
    st.just(X),
    st.floats(0, 1e6, allow_nan=False, allow_infinity=False).map(Num),
    st.sampled_from([0.5, 1e-7, 2.0, 1e20]).map(Num),
)


def _extend(children):
    return st.one_of(
        children.map(Neg),
        st.tuples(st.sampled_from([Add, Sub, Mul, Div, Pow]), children, children)
        .map(lambda t: t[0](t[1], t[2])),
        st.tuples(st.sampled_from(sorted(jets.FUNCTIONS)), children)
        .map(lambda t: Call(t[0], t[1])),
    )


trees = st.recursive(leaf, _extend, max_leaves=12)


@given(trees)
def test_print_parse_round_trip(tree):
    text = to_text(tree)
    again = parse_expression(text)
    assert again == tree
    assert to_text(again) == text


@given(st.sampled_from(sorted(jets.FUNCTIONS)), st.sampled_from(sorted(jets.FUNCTIONS)),
       st.floats(0.05, 0.6))
def test_chain_rule_through_expressions(outer, inner, x):
    g = Call(inner, X)
    composed = Call(outer, g)
    try:
        gj = eval_jet(g, x)
        whole = eval_jet(composed, x)
    except (DomainError, NonFiniteError):
        return
    tower = eval_jet(Call(outer, X), gj.v0).as_tuple()
    assert whole.as_tuple() == compose(tower, gj).as_tuple()


@given(st.floats(-3, 3))
def test_polynomial_evaluation_finite(x):
    assert eval_jet(parse_expression("x^4 - 3*x^2 + 1"), x).is_finite()
