"""Rewriting a finite-dimensional RIF form as first-order ODE systems on constraints."""
from __future__ import annotations

from dataclasses import dataclass, field

from .diffpoly import DiffPolynomial, IndepVar, RationalExpr
from .elimination import DEFAULT_RANKING, Reducer
from .errors import NotClosedError
from .initial_data import parametric_derivatives


@dataclass
class ParametricOdeSystem:
    """dv/dx_i = odes[i](x, v) with h(x, v) = 0 and g(x, v) != 0.

    ``states`` pairs each state name with the derivative it stands for;
    expressions are written in those derivatives and the independent variables.
    """
    signature: object
    states: list
    odes: list
    constraints: list = field(default_factory=list)
    inequations: list = field(default_factory=list)
    ranking: object = None

    @property
    def state_names(self):
        return [name for name, _ in self.states]

    @property
    def state_vars(self):
        return [d for _, d in self.states]

    def ode(self, var):
        i = var if isinstance(var, int) else self.signature.indep_names.index(var)
        return self.odes[i]


def reduce_to_parametric_ode(f):
    data = parametric_derivatives(f)
    params = data.parametric
    pset = set(params)
    sig = f.signature
    reducer = Reducer(f.ranking, f.rules, f.constraints)
    odes = []
    for i in range(sig.n_indep):
        rhs = []
        for theta in params:
            target = theta.diff(i)
            if target in pset:
                rhs.append(RationalExpr(DiffPolynomial.var(target)))
                continue
            expr, _ = reducer.normal_form(DiffPolynomial.var(target))
            stray = expr.derivatives() - pset
            if stray:
                raise NotClosedError("D_%s %s reduces to an expression in non-parametric %s"
                                     % (sig.indep_names[i], sig.derivative_name(theta),
                                        ", ".join(sorted(sig.derivative_name(d) for d in stray))))
            rhs.append(expr)
        odes.append(rhs)
    states = [(sig.derivative_name(d), d) for d in params]
    ineqs = [g for g in f.inequations if g.derivatives() <= pset]
    return ParametricOdeSystem(sig, states, odes, list(f.constraints), ineqs, f.ranking)


def _flow_derivative(expr, i, p):
    """d/dx_i of expr(x, v) along the i-th flow (chain rule through the states)."""
    out = expr.partial(IndepVar(i))
    for k, v in enumerate(p.state_vars):
        dv = expr.partial(v)
        if not dv.is_zero():
            out = out + dv * p.odes[i][k]
    return out


@dataclass
class CompatibilityReport:
    residuals: list  # (kind, detail, residual numerator)

    @property
    def ok(self):
        return not self.residuals


def check_formal_compatibility(p):
    ranking = p.ranking or DEFAULT_RANKING
    red = Reducer(ranking, (), p.constraints)
    n = len(p.odes)
    residuals = []

    def nf(expr):
        num, _, _ = red.reduce_poly(expr.num)
        return num

    for k in range(len(p.states)):
        for i in range(n):
            for j in range(i + 1, n):
                diff = _flow_derivative(p.odes[i][k], j, p) - _flow_derivative(p.odes[j][k], i, p)
                r = nf(diff)
                if r:
                    residuals.append(("cross", (p.states[k][0], i, j), r))
    for c in p.constraints:
        for i in range(n):
            r = nf(_flow_derivative(RationalExpr(c), i, p))
            if r:
                residuals.append(("constraint", (c, i), r))
    return CompatibilityReport(residuals)
