import pytest

from pde2ode import RifForm, parametric_derivatives, parse_system, rif
from pde2ode.errors import InfiniteDimensionalError
from pde2ode.initial_data import Staircase, is_finite_dimensional, leading_set


def names(f, ds):
    return [f.signature.derivative_name(d) for d in ds]


def test_leading_set(ex1, det):
    assert leading_set(ex1) == Staircase({0: ((2, 0), (1, 1), (0, 2))}, 2, 1)
    # dependent variables in declaration order: xi = 0, eta = 1
    assert leading_set(det) == Staircase({1: ((3, 0), (1, 1), (0, 2)), 0: ((1, 0), (0, 1))}, 2, 2)


def test_finiteness():
    assert is_finite_dimensional(Staircase({0: ((2, 0), (1, 1), (0, 2))}, 2, 1))
    # heat equation u_t = u_xx: no pure t-derivative is principal
    assert not is_finite_dimensional(Staircase({0: ((2, 0),)}, 2, 1))
    assert not is_finite_dimensional(Staircase({0: ()}, 2, 1))
    assert is_finite_dimensional(Staircase({0: ((0, 0),)}, 2, 1))


def test_parametric_example1(ex1):
    data = parametric_derivatives(ex1)
    assert names(ex1, data.parametric) == ["u", "u_x", "u_y"]
    assert data.dimension == 3
    assert data.point_symbols == ["x_0", "y_0"]
    assert len(data.constraints_among_parametric) == 2


def test_parametric_detsys(det, det_data):
    assert names(det, det_data.parametric) == ["xi", "eta", "eta_x", "eta_y", "eta_xx"]
    assert det_data.dimension == 5
    assert det_data.constants == ["C_1", "C_2", "C_3", "C_4", "C_5"]


def test_infinite():
    f = rif(parse_system("vars x, t; funcs u(x, t); eq diff(u,t) = diff(u,x,x);"))
    with pytest.raises(InfiniteDimensionalError) as err:
        parametric_derivatives(f)
    assert err.value.code == "E_INFINITE"


def test_empty_rules(ex1):
    f = RifForm(ex1.signature, ex1.ranking, [], [], [])
    assert leading_set(f) == Staircase({0: ()}, 2, 1)
    assert not is_finite_dimensional(leading_set(f))


def test_nonlinear_equation_is_prolonged():
    # u_x^2 = u has no linear lead, but its prolongations do
    f = rif(parse_system("vars x, y; funcs u(x, y); eq diff(u,x)^2 - u;"))
    assert f.rules and f.constraints
