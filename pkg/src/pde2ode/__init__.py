"""Differential elimination of polynomial PDE systems and their reduction to ODE systems on constraints."""
from .diffpoly import (Derivative, DiffPolynomial, IndepVar, RationalExpr, SystemSignature,
                       evaluate, total_derivative)
from .elimination import Ranking, RifForm, Rule, probe_pivot_case, reduce, rif
from .errors import Pde2OdeError
from .initial_data import InitialData, parametric_derivatives
from .lie import (StructureConstants, derived_algebra_dimension, is_derived_abelian,
                  linearizability_verdict, structure_constants)
from .ode import ParametricOdeSystem, check_formal_compatibility, reduce_to_parametric_ode
from .parser import SystemSource, parse_expr, parse_polynomial_system, parse_system
from .dae import CurveSpec, check_consistent_point, check_flow_commutativity, integrate_along_curve
from .zero_dim import build_multiplication_matrices, poly_to_diff, solve_zero_dim

__version__ = "0.1.0"
