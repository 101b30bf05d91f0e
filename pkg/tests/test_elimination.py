import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pde2ode import parse_system, probe_pivot_case, reduce, rif
from pde2ode.diffpoly import Derivative, DiffPolynomial, RationalExpr
from pde2ode.elimination import (CAPPED, COMPLETE, Ranking, compare, leading_derivative,
                                 pivot_factors)
from pde2ode.errors import InconsistentError, NoDerivativeError

from conftest import poly


def D(sig, *args):
    return sig.derivative(*args)


def test_compare():
    u_xx, u_xy, u_y = Derivative(0, (2, 0)), Derivative(0, (1, 1)), Derivative(0, (0, 1))
    assert compare(u_xx, u_y) == 1
    assert compare(u_xx, u_xy, Ranking((0, 1))) == 1
    assert compare(u_xx, u_xy, Ranking((1, 0))) == -1
    assert compare(u_xy, u_xy) == 0
    # earlier-declared dependent variables rank higher at equal multi-index
    assert compare(Derivative(0, (1, 0)), Derivative(1, (1, 0))) == 1
    assert compare(Derivative(0, (1, 0)), Derivative(1, (1, 0)), Ranking(None, (1, 0))) == -1


def test_leading_derivative(ex1_src):
    sig = ex1_src.signature
    assert leading_derivative(ex1_src.equations[0]) == D(sig, "u", "x", "x")
    assert leading_derivative(ex1_src.equations[1]) == D(sig, "u", "y")
    with pytest.raises(NoDerivativeError):
        leading_derivative(DiffPolynomial.constant(3))


def test_pivot_factors(ex1_src):
    sig = ex1_src.signature
    assert pivot_factors(poly("4*diff(u,y)+2", sig)) == [poly("2*diff(u,y)+1", sig)]
    assert set(pivot_factors(poly("y^2*diff(u,x)", sig))) == {poly("y", sig), poly("diff(u,x)", sig)}
    assert pivot_factors(DiffPolynomial.constant(5)) == []


def test_example1_rif(ex1):
    sig = ex1.signature
    assert ex1.status == COMPLETE
    rhs = {r.lead: r.rhs for r in ex1.rules}
    p = poly("2*diff(u,y)+1", sig)
    assert rhs == {
        D(sig, "u", "x", "x"): RationalExpr(poly("diff(u,x)", sig), p),
        D(sig, "u", "x", "y"): RationalExpr(poly("diff(u,x)", sig), p),
        D(sig, "u", "y", "y"): RationalExpr(poly("diff(u,y)", sig), p),
    }
    want = {poly("diff(u,x)*diff(u,y) - diff(u,x)^2", sig), poly("diff(u,y)^2 + diff(u,y) - u", sig)}
    # constraints are stored up to sign normalization
    assert {c for c in ex1.constraints} == {w if w.leading_term(Ranking().key)[1] > 0 else -w for w in want}
    assert ex1.inequations == [p]


def test_detsys_returned_unchanged(det_src, det):
    sig = det.signature
    assert det.constraints == []
    assert det.inequations == [poly("y", sig)]
    leads = {r.lead for r in det.rules}
    assert leads == {D(sig, "eta", "x", "x", "x"), D(sig, "eta", "x", "y"), D(sig, "eta", "y", "y"),
                     D(sig, "xi", "x"), D(sig, "xi", "y")}
    for r in det.rules:
        assert any(r.equation * c == e or r.equation * c == -e
                   for e in det_src.equations for c in (1, poly("y", sig), poly("y^2", sig), 2, poly("2*y", sig)))


def test_single_rule():
    f = rif(parse_system("vars x; funcs u(x); eq diff(u,x) - u;"))
    assert len(f.rules) == 1 and not f.constraints and not f.inequations


def test_reduce_examples(det, ex1):
    sig = det.signature
    nf, used = reduce(poly("diff(eta,x,x,y)", sig), det)
    assert nf == RationalExpr(-poly("diff(eta,x,x)", sig), poly("y", sig))
    assert poly("y", sig) in used
    for r in det.rules:
        assert reduce(DiffPolynomial.var(r.lead), det)[0] == r.rhs
    s1 = ex1.signature
    nf, _ = reduce(poly("2*diff(u,x)*diff(u,y) - 2*diff(u,x)^2", s1), ex1)
    assert nf.is_zero()


def test_inconsistent():
    with pytest.raises(InconsistentError) as err:
        rif(parse_system("vars x; funcs u(x); eq diff(u,x) - 1; eq diff(u,x,x) - 1;"))
    assert err.value.code == "E_INCONSISTENT"


def test_integrability_condition_found():
    # u_xx = u_y, u_yy = 0 is compatible only because D_y(u_yy) = 0 as well
    f = rif(parse_system("vars x,y; funcs u(x,y); eq diff(u,y,y); eq diff(u,x,x) - diff(u,y);"))
    assert f.status == COMPLETE and len(f.rules) == 2
    f = rif(parse_system("vars x,y; funcs u(x,y); eq diff(u,y,y) - x*u; eq diff(u,x,x) - y*u;"))
    assert [r.lead for r in f.rules] == [Derivative(0, (0, 0))]


def test_cap():
    src = parse_system("vars x,y; funcs u(x,y); eq diff(u,y,y); eq diff(u,x,x) - diff(u,y);")
    assert rif(src, prolongation_cap=1).status == CAPPED


def test_probe(ex1_src):
    sig = ex1_src.signature
    assert probe_pivot_case(ex1_src, poly("2*diff(u,y)+1", sig)) == "inconsistent"
    src = parse_system("vars x; funcs u(x); eq diff(u,x);")
    assert probe_pivot_case(src, poly("u", src.signature)) == "consistent"
    capped = parse_system("vars x,y; funcs u(x,y); eq diff(u,x,x) - diff(u,y);")
    assert probe_pivot_case(capped, poly("diff(u,y,y)", capped.signature), prolongation_cap=1) == "unknown"


def test_ranking_changes_leads():
    src = parse_system("vars x, t; funcs u(x, t); eq diff(u,t) - diff(u,x,x);")
    assert rif(src).rules[0].lead == Derivative(0, (2, 0))


# -- reduce is idempotent and leaves no principal derivatives --------------------

ORDER3 = [Derivative(0, (i, j)) for i in range(4) for j in range(4) if i + j <= 3]
monomials = st.lists(st.tuples(st.sampled_from(ORDER3), st.integers(1, 2)), max_size=2).map(
    lambda fs: tuple(sorted({v: e for v, e in fs}.items())))
polys = st.dictionaries(monomials, st.integers(-4, 4), max_size=3).map(DiffPolynomial)


@settings(max_examples=60, deadline=None)
@given(polys)
def test_reduce_idempotent(ex1, p):
    # the denominator is a product of pivots; the numerator is fully reduced
    nf, used = reduce(p, ex1)
    again, more = reduce(nf.num, ex1)
    assert again == RationalExpr(nf.num) and not more
    assert all(g in ex1.inequations for g in used)
    leads = [r.lead for r in ex1.rules]
    assert not any(l.divides(d) for d in nf.derivatives() for l in leads)


@settings(max_examples=30, deadline=None)
@given(polys)
def test_reduce_is_zero_on_the_ideal(ex1, p):
    # multiples of a rule's equation reduce to zero
    e = ex1.rules[0].equation * p
    assert reduce(e, ex1)[0].is_zero()
