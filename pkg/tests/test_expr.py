import numpy as np
from pytest import fixture, raises

from crlab.cutoff import chi0
from crlab.exceptions import (
    ArityError,
    EvaluationError,
    ExpressionSyntaxError,
    UnknownIdentifierError,
)
from crlab.expr import DefiningExpr, Wrt, derivative, evaluate, parse, parse_defining_function


@fixture
def ball():
    return parse_defining_function("abs2(z1)+abs2(z2)-1", 2)


def test_print_normalized(ball: DefiningExpr):
    assert str(ball) == "abs2(z1)+abs2(z2)-1.0"


def test_printed_expression_parses_back():
    z = np.array([[0.3 + 0.1j, -0.2 + 0.4j]])
    for text in ("re(z1^2*z2)-2*im(z2)", "exp(-abs2(z1))/(1+abs2(z2))", "chi0(2*abs2(z1))+t^2"):
        node = parse(text, 2)
        again = parse(str(node), 2)
        assert np.allclose(evaluate(again, z, 0.7), evaluate(node, z, 0.7))


def test_syntax_error_offset():
    with raises(ExpressionSyntaxError) as e:
        parse("z1 + * 2", 1)

    assert e.value.code == "syntax"
    assert e.value.offset == 5


def test_unknown_identifier():
    with raises(UnknownIdentifierError) as e:
        parse("abs2(z3)", 2)

    assert e.value.details["name"] == "z3"


def test_arity():
    with raises(ArityError):
        parse("exp(z1, z1)", 1)


def test_named_constants():
    node = parse("c*z1", 1, constants={"c": 2})
    assert complex(evaluate(node, [1 + 1j])) == 2 + 2j

    with raises(UnknownIdentifierError):
        parse("c*z1", 1)


def test_negative_exponent():
    assert complex(evaluate(parse("z1^-2", 1), [2 + 0j])) == 0.25


def test_evaluation_errors():
    with raises(EvaluationError) as e:
        evaluate(parse("log(re(z1))", 1), [-1 + 0j])
    assert e.value.code == "log_domain"

    with raises(EvaluationError) as e:
        evaluate(parse("1/z1", 1), [0j])
    assert e.value.code == "division_by_zero"

    with raises(EvaluationError) as e:
        parse_defining_function("im(z1)+z1", 1)([1j])
    assert e.value.code == "not_real"


def test_wirtinger_derivatives():
    node = parse("abs2(z1)", 1)
    z = [1 + 2j]

    assert complex(evaluate(derivative(node, Wrt("z", 1)), z)) == 1 - 2j
    assert complex(evaluate(derivative(node, Wrt("zbar", 1)), z)) == 1 + 2j
    assert complex(evaluate(derivative(parse("t^3*re(z1)", 1), Wrt("t")), z, 2.0)) == 12


def test_profile_derivative():
    node = parse("chi0(re(z1))", 1)
    d = derivative(node, Wrt("z", 1))
    # d/dz re(z) = 1/2
    expected = 0.5 * float(chi0(1.5, order=1))
    assert np.isclose(complex(evaluate(d, [1.5 + 0j])), expected)


def test_freeze_and_substitute(ball: DefiningExpr):
    r = parse_defining_function("abs2(z1)-t", 1)
    assert float(r.freeze(0.5)([0j], 0.9)) == -0.5

    scaled = ball.substitute({1: parse("2*z1", 2)})
    assert float(scaled([0.5 + 0j, 0j])) == 0.0


def test_derivative_cache_bounded():
    limit = derivative.cache_info().maxsize
    assert limit is not None

    for k in range(limit + 10):
        derivative(parse(f"abs2(z1) + {k}", 1), Wrt("z", 1))

    assert derivative.cache_info().currsize <= limit
