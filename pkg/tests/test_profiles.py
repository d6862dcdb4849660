import math

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from qschwarz import jets
from qschwarz.errors import DomainError, ExprSyntaxError, UnknownIdentifier
from qschwarz.profiles import (
    FUNCTIONS,
    BinOp,
    Call,
    Neg,
    Num,
    Var,
    derivative,
    eval_jet,
    evaluate,
    parse,
    to_source,
)


def test_single_variable():
    assert parse("r").ast == Var("r")


@pytest.mark.parametrize(
    "source, r, expected",
    [
        ("2*r^3", 2.0, 16.0),
        ("2+3*4^2", 0.0, 50.0),
        ("-r^2", 3.0, -9.0),
        ("2^3^2", 0.0, 512.0),
        ("2^-1", 0.0, 0.5),
        ("(2^3)^2", 0.0, 64.0),
        ("8/4/2", 0.0, 1.0),
        ("1-2-3", 0.0, -4.0),
        ("--r", 1.5, 1.5),
        ("0.5*r^1.5", 4.0, 4.0),
        ("1e2*r", 0.5, 50.0),
        (".5e-1", 0.0, 0.05),
        ("sqrt(r)*exp(0)", 9.0, 3.0),
        ("ln(exp(r))", 1.25, 1.25),
        ("sin(r)^2 + cos(r)^2", 0.3, 1.0),
        ("r^r", 2.0, 4.0),
    ],
)
def test_evaluation(source, r, expected):
    assert evaluate(parse(source), r) == pytest.approx(expected, rel=1e-15)


def test_precedence_is_exact():
    assert evaluate(parse("2+3*4^2"), 1.0) == 50.0


@pytest.mark.parametrize(
    "source, name, offset",
    [("q+1", "q", 0), ("r + tau", "tau", 4), ("2*G", "G", 2), ("x", "x", 0), ("r*pi", "pi", 2)],
)
def test_unknown_identifier(source, name, offset):
    with pytest.raises(UnknownIdentifier) as info:
        parse(source)
    assert info.value.name == name
    assert info.value.offset == offset


@pytest.mark.parametrize(
    "source, offset",
    [
        ("(", 1),
        ("", 0),
        ("r+", 2),
        ("2*)", 2),
        ("r r", 2),
        ("r $ 1", 2),
        ("exp r", 4),
        ("(r", 2),
        ("r)", 1),
        ("sin()", 4),
        ("1..2", 2),
    ],
)
def test_syntax_errors_report_offsets(source, offset):
    with pytest.raises(ExprSyntaxError) as info:
        parse(source)
    assert info.value.offset == offset


def test_offsets_count_bytes():
    # "é" is two bytes in UTF-8; the bad character sits after it
    with pytest.raises(ExprSyntaxError) as info:
        parse("r*(é)")
    assert info.value.offset == 3
    source = "r + é"
    with pytest.raises(ExprSyntaxError) as info:
        parse(source)
    assert info.value.offset == len(source[:4].encode("utf-8"))


def test_offsets_after_multibyte_whitespace():
    # U+3000 (ideographic space) is whitespace and three bytes long
    with pytest.raises(ExprSyntaxError) as info:
        parse("r　+　$")
    assert info.value.offset == 1 + 3 + 1 + 3


def test_square_jet():
    j = eval_jet(parse("r^2"), jets.coord_r(3.0))
    assert j.fields() == (9.0, 6.0, 0.0, 2.0, 0.0, 0.0)


def test_exp_jet():
    j = eval_jet(parse("exp(r)"), jets.coord_r(0.0))
    assert (j.val, j.d_r, j.d_rr) == (1.0, 1.0, 1.0)


def test_sqrt_outside_domain():
    with pytest.raises(DomainError):
        eval_jet(parse("sqrt(r)"), jets.coord_r(-1.0))


# --------------------------------------------------------- random trees

names = st.sampled_from(FUNCTIONS)
numbers = st.floats(min_value=0.0, max_value=1e6, allow_nan=False, allow_infinity=False)


def trees(max_leaves=12):
    leaf = st.one_of(st.builds(Num, numbers), st.just(Var("r")))
    return st.recursive(
        leaf,
        lambda kids: st.one_of(
            st.builds(Neg, kids),
            st.builds(Call, names, kids),
            st.builds(BinOp, st.sampled_from("+-*/^"), kids, kids),
        ),
        max_leaves=max_leaves,
    )


@given(trees())
def test_source_roundtrip(tree):
    assert parse(to_source(tree)).ast == tree


@pytest.mark.parametrize(
    "source",
    ["r", "2*r^3", "0.5*r^1.5", "-(r+1)^2", "exp(-r)/(1+r)", "r^-2", "(-r)^2", "2^r^2", "sin(cos(r))*r - 3"],
)
def test_printer_is_canonical(source):
    once = to_source(parse(source).ast)
    assert to_source(parse(once).ast) == once
    assert evaluate(parse(once), 1.3) == evaluate(parse(source), 1.3)


# fixed, well-behaved expressions near r = 1.3 with second-derivative oracles
SMOOTH = [
    "r",
    "2*r^3",
    "0.5*r^1.5",
    "exp(-r)*sin(3*r)",
    "ln(1+r^2)/sqrt(r)",
    "r^r",
    "cos(r)^2 - 1/r",
    "(r+1)^(r/2)",
]


@pytest.mark.parametrize("source", SMOOTH)
def test_symbolic_derivative_matches_jets(source):
    p = parse(source)
    for r in (0.7, 1.3, 2.9):
        j = eval_jet(p, jets.coord_r(r))
        dj = eval_jet(p.derivative, jets.coord_r(r))
        assert dj.val == pytest.approx(j.d_r, rel=1e-12, abs=1e-13)
        assert dj.d_r == pytest.approx(j.d_rr, rel=1e-12, abs=1e-13)


@given(trees(max_leaves=8), st.floats(min_value=0.2, max_value=3.0))
def test_no_tau_dependence(tree, r):
    try:
        j = eval_jet(parse(to_source(tree)), jets.coord_r(r))
    except (DomainError, ZeroDivisionError):
        assume(False)
    # plain arithmetic may overflow to inf, and inf * 0 is nan
    assume(math.isfinite(j.val) and math.isfinite(j.d_r) and math.isfinite(j.d_rr))
    assert (j.d_tau, j.d_rtau, j.d_tautau) == (0.0, 0.0, 0.0)


@given(trees(max_leaves=8), st.floats(min_value=0.2, max_value=3.0))
def test_random_derivative_matches_jets(tree, r):
    try:
        j = eval_jet(parse(to_source(tree)), jets.coord_r(r))
        d = eval_jet(parse(to_source(derivative(tree))), jets.coord_r(r))
    except (DomainError, ZeroDivisionError):
        assume(False)
    assume(all(math.isfinite(x) and abs(x) < 1e8 for x in j.fields() + d.fields()))
    scale = max(1.0, abs(j.val), abs(j.d_r), abs(d.val))
    assert d.val == pytest.approx(j.d_r, abs=1e-9 * scale)


def test_constant_profiles():
    assert parse("0").is_constant
    assert parse("exp(2)*3").is_constant
    assert not parse("r-r").is_constant
    assert parse("5").derivative.ast == Num(0.0)


def test_profile_is_callable_and_printable():
    p = parse("2*r^3")
    assert p(2.0) == 16.0
    assert str(p) == "2*r^3"
