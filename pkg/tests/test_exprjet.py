import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from thinspec import exprjet
from thinspec.exprjet import (
    BinOp,
    Call,
    Const,
    Jet,
    JetDomainError,
    Neg,
    Num,
    OrderCapError,
    ParseError,
    UnknownIdentifierError,
    Var,
    eval_jet,
    evaluate,
    parse,
    to_string,
)


def test_parse_disk_width():
    e = parse("2*sqrt(x - x^2)")
    assert evaluate(e, 0.5) == pytest.approx(1.0, abs=1e-15)


def test_parse_nonconvex_width():
    e = parse("1 + sin(7*pi*x/2) + 7*pi*(1-x)/4")
    x = 0.3
    assert evaluate(e, x) == pytest.approx(1 + math.sin(7 * math.pi * x / 2) + 7 * math.pi * (1 - x) / 4)


def test_syntax_error_offset():
    with pytest.raises(ParseError) as info:
        parse("2*sqrt(x -")
    assert info.value.offset == 10


@pytest.mark.parametrize("src, offset", [("x + y", 4), ("2*foo(x)", 2)])
def test_unknown_identifier(src, offset):
    with pytest.raises(UnknownIdentifierError) as info:
        parse(src)
    assert info.value.offset == offset


@pytest.mark.parametrize("src", ["", "   ", "(x", "x)", "sin(x, x)", "pow(x)", "x $ 2", "*x"])
def test_malformed(src):
    with pytest.raises(ParseError):
        parse(src)


@pytest.mark.parametrize(
    "src, expected",
    [
        ("2^3^2", 512.0),
        ("-2^2", -4.0),
        ("2^-1", 0.5),
        ("8/4/2", 1.0),
        ("1-2-3", -4.0),
        ("pow(2, 10)", 1024.0),
        ("abs(-3)", 3.0),
        ("exp(log(5))", 5.0),
    ],
)
def test_precedence_and_functions(src, expected):
    assert evaluate(parse(src), 0.0) == pytest.approx(expected)


def test_evaluate_vectorised_and_nan_outside_domain():
    e = parse("sqrt(x - x^2)")
    xs = np.array([-0.5, 0.0, 0.25, 1.5])
    v = evaluate(e, xs)
    assert np.isnan(v[0]) and np.isnan(v[3])
    assert v[1] == 0.0
    assert v[2] == pytest.approx(math.sqrt(0.1875))


def test_jet_disk_width():
    d = eval_jet("2*sqrt(x-x^2)", 0.5, 6).derivatives()
    np.testing.assert_allclose(d, [1, 0, -4, 0, -48, 0, -2880], atol=1e-9)


def test_jet_identity():
    j = eval_jet("x", 0.3, 2)
    np.testing.assert_array_equal(j.coeffs, [0.3, 1.0, 0.0])


def test_jet_sqrt_at_branch_point():
    with pytest.raises(JetDomainError):
        eval_jet("sqrt(x)", 0.0, 1)


@pytest.mark.parametrize("src", ["1/x", "log(x)", "x^0.5"])
def test_jet_domain_errors_at_zero(src):
    with pytest.raises(JetDomainError):
        eval_jet(src, 0.0, 3)


def test_order_cap():
    with pytest.raises(OrderCapError):
        eval_jet("x", 0.1, 17)
    assert eval_jet("x", 0.1, 20, cap=32).order == 20


@pytest.mark.parametrize(
    "src, fn",
    [
        ("sin(x)", lambda x, k: math.sin(x + k * math.pi / 2)),
        ("cos(x)", lambda x, k: math.cos(x + k * math.pi / 2)),
        ("exp(2*x)", lambda x, k: 2**k * math.exp(2 * x)),
    ],
)
def test_elementary_derivatives(src, fn):
    x = 0.37
    d = eval_jet(src, x, 10).derivatives()
    np.testing.assert_allclose(d, [fn(x, k) for k in range(11)], rtol=1e-12)


def test_log_and_power_derivatives():
    x = 0.7
    d = eval_jet("log(x)", x, 6).derivatives()
    expected = [math.log(x)] + [(-1) ** (k - 1) * math.factorial(k - 1) / x**k for k in range(1, 7)]
    np.testing.assert_allclose(d, expected, rtol=1e-12)
    d = eval_jet("x^2.5", x, 4).derivatives()
    coef = [1.0, 2.5, 2.5 * 1.5, 2.5 * 1.5 * 0.5, 2.5 * 1.5 * 0.5 * -0.5]
    np.testing.assert_allclose(d, [c * x ** (2.5 - k) for k, c in enumerate(coef)], rtol=1e-12)


def test_jet_exponent_power():
    # x^x = exp(x log x)
    x = 1.3
    d = eval_jet("x^x", x, 2).derivatives()
    f = x**x
    f1 = f * (math.log(x) + 1)
    f2 = f * (math.log(x) + 1) ** 2 + f / x
    np.testing.assert_allclose(d, [f, f1, f2], rtol=1e-12)


def test_jet_derivative_shift():
    j = eval_jet("x^3", 2.0, 4)
    np.testing.assert_allclose(j.derivative().derivatives(), [12.0, 12.0, 6.0, 0.0])


@given(
    st.lists(st.floats(-3, 3), min_size=1, max_size=7),
    st.floats(-1.5, 1.5),
)
def test_polynomial_jets_match_symbolic(coeffs, x):
    src = " + ".join(f"({c!r})*x^{i}" for i, c in enumerate(coeffs))
    d = eval_jet(src, x, 6).derivatives()
    P = np.polynomial.Polynomial(coeffs)
    expected = [P.deriv(k)(x) if k else P(x) for k in range(7)]
    scale = max(1.0, max(abs(v) for v in expected))
    np.testing.assert_allclose(d, expected, rtol=1e-12, atol=1e-12 * scale)


_OUTER = ["sin(u)", "cos(u)", "exp(u)", "sqrt(u)", "log(u)", "u^3", "1/u"]
_INNER = ["1 + x^2", "2 + sin(x)", "exp(x)", "3 - x", "1.5 + x*cos(x)"]


def _compose(outer: Jet, inner: Jet) -> np.ndarray:
    """Taylor coefficients of f(g(x0 + t)) from the jets of f at g(x0) and g at x0."""
    n = inner.order
    delta = inner.coeffs.copy()
    delta[0] = 0.0
    out = np.zeros(n + 1)
    power = np.zeros(n + 1)
    power[0] = 1.0
    for j in range(n + 1):
        out += outer.coeffs[j] * power
        power = np.convolve(power, delta)[: n + 1]
    return out


@given(st.sampled_from(_OUTER), st.sampled_from(_INNER), st.floats(-1, 1))
def test_chain_rule(outer, inner, x):
    order = 6
    g = eval_jet(inner, x, order)
    f = eval_jet(outer.replace("u", "x"), float(g.coeffs[0]), order)
    fg = eval_jet(outer.replace("u", f"({inner})"), x, order)
    np.testing.assert_allclose(fg.coeffs, _compose(f, g), rtol=1e-10, atol=1e-10)


def _asts():
    leaves = st.one_of(
        st.integers(0, 50).map(lambda v: Num(float(v))),
        st.sampled_from([0.5, 2.25, 1e-3, 7.125]).map(Num),
        st.just(Var()),
        st.just(Const("pi")),
    )

    def extend(children):
        return st.one_of(
            st.builds(BinOp, st.sampled_from("+-*/^"), children, children),
            children.map(Neg),
            st.builds(lambda f, a: Call(f, (a,)), st.sampled_from(exprjet.UNARY_FUNCS), children),
            st.builds(lambda a, b: Call("pow", (a, b)), children, children),
        )

    return st.recursive(leaves, extend, max_leaves=12)


@given(_asts())
def test_print_parse_roundtrip(e):
    assert parse(to_string(e)) == e
