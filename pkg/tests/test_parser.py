import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pde2ode import parse_expr, parse_polynomial_system, parse_system, rif
from pde2ode.diffpoly import Derivative, DiffPolynomial, IndepVar, SystemSignature
from pde2ode.errors import BadArityError, ParseError, UnknownSymbolError
from pde2ode.render import format_expr, format_poly, poly_from_json, poly_json, rif_text

from conftest import poly

EX1 = ("vars x,y; funcs u(x,y); eq diff(u,x,x) - diff(u,x,y) = 0; "
       "eq diff(u,y)^2 + diff(u,y) - u = 0;")


def test_parse_example1():
    src = parse_system(EX1)
    sig = src.signature
    assert sig.indep_names == ("x", "y") and sig.dep_names == ("u",)
    assert src.equations == [poly("diff(u,x,x) - diff(u,x,y)", sig),
                             poly("diff(u,y)^2 + diff(u,y) - u", sig)]
    assert src.max_order == 2


def test_parse_single_equation():
    src = parse_system("vars x; funcs u(x); eq diff(u,x) - u = 0;")
    assert len(src.equations) == 1


def test_unknown_symbol():
    with pytest.raises(UnknownSymbolError) as err:
        parse_system("vars x; funcs u(x); eq diff(v,x) = 0;")
    assert err.value.code == "E_UNKNOWN_SYMBOL"


def test_bad_arity():
    with pytest.raises(BadArityError):
        parse_system("vars x, y; funcs u(x); eq u;")
    with pytest.raises(BadArityError):
        parse_system("vars x; funcs u(x); eq diff(x, x);")


def test_syntax_error_reports_position():
    with pytest.raises(ParseError) as err:
        parse_system("vars x; funcs u(x); eq diff(u,x) + ;")
    assert err.value.position == 35
    assert err.value.code == "E_SYNTAX"


def test_repetition_and_comments():
    a = parse_system("# comment\nvars x; funcs u(x); eq diff(u, x$3) = u; # trailing\n")
    b = parse_system("vars x; funcs u(x); eq diff(u,x,x,x) - u;")
    assert a == b


def test_denominators_become_inequations():
    src = parse_system("vars x, y; funcs u(x, y); eq diff(u,x) = u/y; ineq u;")
    sig = src.signature
    assert src.equations == [poly("y*diff(u,x) - u", sig)]
    assert set(src.inequations) == {poly("u", sig), poly("y", sig)}


def test_precedence():
    sig = SystemSignature(("x",), ("u",))
    assert parse_expr("-x^2", sig).num == poly("-(x^2)", sig)
    assert parse_expr("2*x^2/4 - 1", sig).num == poly("1/2*x*x - 1", sig)


def test_polynomial_system():
    names, polys = parse_polynomial_system("vars x, y; eq x^2 - y; eq y/2 - 1;")
    assert names == ("x", "y")
    assert polys[1] == DiffPolynomial({((IndepVar(1), 1),): 0.5, (): -1})
    with pytest.raises(ParseError):
        parse_polynomial_system("vars x; eq 1/x;")


def test_render_constant():
    sig = SystemSignature(("x",), ("u",))
    assert format_poly(DiffPolynomial.constant(0.5), sig) == "1/2"
    from fractions import Fraction
    assert format_poly(DiffPolynomial.constant(Fraction(1, 3)), sig) == "1/3"


def test_source_round_trip(ex1_src):
    text = "vars x, y;\nfuncs u(x, y);\n" + "".join(
        "eq %s;\n" % format_poly(p, ex1_src.signature) for p in ex1_src.equations)
    assert parse_system(text) == ex1_src


def test_rif_text_round_trip(ex1, det):
    for f in (ex1, det):
        again = rif(parse_system(rif_text(f)))
        assert [r.lead for r in again.rules] == [r.lead for r in f.rules]
        assert all(a.rhs == b.rhs for a, b in zip(again.rules, f.rules))
        assert again.constraints == f.constraints
        assert set(again.inequations) == set(f.inequations)


# -- randomized round trip ----------------------------------------------------

SIG = SystemSignature(("x", "y"), ("u", "eta"))
VARS = [Derivative(dep, (i, j)) for dep in (0, 1) for i in range(4) for j in range(3)]
VARS += [IndepVar(0), IndepVar(1)]
monomials = st.lists(st.tuples(st.sampled_from(VARS), st.integers(1, 3)), max_size=3).map(
    lambda fs: tuple(sorted({v: e for v, e in fs}.items())))
polys = st.dictionaries(monomials, st.fractions(min_value=-9, max_value=9, max_denominator=7),
                        max_size=5).map(DiffPolynomial)


@settings(max_examples=100, deadline=None)
@given(polys)
def test_polynomial_text_round_trip(p):
    assert parse_expr(format_poly(p, SIG), SIG).num == p


@settings(max_examples=60, deadline=None)
@given(polys, polys)
def test_quotient_text_round_trip(p, q):
    if not q:
        return
    from pde2ode.diffpoly import RationalExpr
    e = RationalExpr(p, q)
    assert parse_expr(format_expr(e, SIG), SIG) == e


@settings(max_examples=60, deadline=None)
@given(polys)
def test_polynomial_json_round_trip(p):
    assert poly_from_json(poly_json(p, SIG), SIG) == p
