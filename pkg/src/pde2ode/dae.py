"""Numerical integration of parametric ODE systems on their constraint manifold.

The flows are advanced with classical RK4 along straight curves in the space
of independent variables; after each step the state is projected back onto
h(x, v) = 0 by Gauss-Newton.  Pivots (inequations) are monitored at every
stage so the integration stops before it divides by zero.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .diffpoly import IndepVar, RationalExpr
from .errors import DivisionByZeroError, PivotError, ProjectionError

PIVOT_GUARD = 1e-8


def _poly_source(p, names):
    terms = []
    for mono, c in p.terms.items():
        factors = [repr(float(c))]
        for v, e in mono:
            factors.append(names[v] if e == 1 else "%s**%d" % (names[v], e))
        terms.append("*".join(factors))
    return " + ".join(terms) if terms else "0.0"


def compile_exprs(exprs, variables):
    """Compile RationalExprs/polynomials into one function f(args) -> list of floats."""
    names = {v: "a[%d]" % k for k, v in enumerate(variables)}
    parts = []
    for e in exprs:
        if isinstance(e, RationalExpr):
            if e.den == 1:
                parts.append("(%s)" % _poly_source(e.num, names))
            else:
                parts.append("(%s)/(%s)" % (_poly_source(e.num, names), _poly_source(e.den, names)))
        else:
            parts.append("(%s)" % _poly_source(e, names))
    code = "lambda a: [%s]" % ", ".join(parts)
    return eval(code, {"__builtins__": {}})


class NumericSystem:
    """Float evaluators for the right-hand sides, constraints, pivots and Jacobian."""

    def __init__(self, p, guard=PIVOT_GUARD):
        self.p = p
        self.guard = guard
        self.n = len(p.odes)
        self.m = len(p.states)
        self.variables = [IndepVar(i) for i in range(self.n)] + list(p.state_vars)
        self._f = [compile_exprs(rhs, self.variables) for rhs in p.odes]
        self._dens = [compile_exprs([e.den for e in rhs], self.variables) for rhs in p.odes]
        self._h = compile_exprs(p.constraints, self.variables)
        self._g = compile_exprs(p.inequations, self.variables)
        jac = [c.partial(v) for c in p.constraints for v in p.state_vars]
        self._jac = compile_exprs(jac, self.variables)

    def _args(self, x, v):
        return list(x) + list(v)

    def f(self, i, x, v):
        a = self._args(x, v)
        dens = self._dens[i](a)
        if any(abs(d) <= 1e-300 for d in dens):
            raise DivisionByZeroError("right-hand side denominator vanishes")
        return np.array(self._f[i](a), dtype=float)

    def h(self, x, v):
        return np.array(self._h(self._args(x, v)), dtype=float)

    def g(self, x, v):
        return np.array(self._g(self._args(x, v)), dtype=float)

    def jac_h(self, x, v):
        vals = self._jac(self._args(x, v))
        return np.array(vals, dtype=float).reshape(len(self.p.constraints), self.m)


@dataclass
class CurveSpec:
    start: tuple
    direction: tuple
    h: float
    steps: int

    def __post_init__(self):
        if self.h <= 0:
            raise ValueError("step size must be positive")
        if self.steps < 1:
            raise ValueError("at least one step is required")
        if not any(self.direction):
            raise ValueError("direction must be nonzero")


@dataclass
class Trajectory:
    samples: list = field(default_factory=list)  # (t, x, v)
    drift: list = field(default_factory=list)
    pivot_margin: list = field(default_factory=list)

    def rows(self):
        for (t, x, v), dr, pm in zip(self.samples, self.drift, self.pivot_margin):
            yield [t] + list(x) + list(v) + [dr, pm]


@dataclass
class PointCheck:
    ok: bool
    violations: list

    def __bool__(self):
        return self.ok


def _max_abs(a):
    return float(np.max(np.abs(a))) if len(a) else 0.0


def _min_abs(a):
    return float(np.min(np.abs(a))) if len(a) else math.inf


def check_consistent_point(p, x0, v0, tol=1e-10, guard=PIVOT_GUARD):
    ns = p if isinstance(p, NumericSystem) else NumericSystem(p, guard)
    out = []
    for c, val in zip(ns.p.constraints, ns.h(x0, v0)):
        if abs(val) > tol:
            out.append(("constraint", c, float(val)))
    for g, val in zip(ns.p.inequations, ns.g(x0, v0)):
        if abs(val) < guard:
            out.append(("inequation", g, float(val)))
    return PointCheck(not out, out)


def _direction_field(ns, x0, d, t, v, signs):
    x = [a + t * b for a, b in zip(x0, d)]
    gv = ns.g(x, v)
    if len(gv):
        bad = np.flatnonzero((np.abs(gv) < ns.guard) | (np.sign(gv) != signs) | ~np.isfinite(gv))
        if len(bad):
            k = int(bad[0])
            raise PivotError("inequation %d approaches zero (value %.3g) at t=%.6g"
                             % (k, gv[k], t), ns.p.inequations[k], t)
    total = np.zeros(ns.m)
    for i, di in enumerate(d):
        if di:
            total += di * ns.f(i, x, v)
    if not np.all(np.isfinite(total)):
        raise PivotError("non-finite right-hand side at t=%.6g" % t, None, t)
    return total


def rk4_step(ns, x0, d, t, v, h):
    gv = ns.g([a + t * b for a, b in zip(x0, d)], v)
    signs = np.sign(gv)
    k1 = _direction_field(ns, x0, d, t, v, signs)
    k2 = _direction_field(ns, x0, d, t + h / 2, v + h / 2 * k1, signs)
    k3 = _direction_field(ns, x0, d, t + h / 2, v + h / 2 * k2, signs)
    k4 = _direction_field(ns, x0, d, t + h, v + h * k3, signs)
    return v + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def project(ns, x, v, tol=1e-12, max_iter=5):
    if not ns.p.constraints:
        return v
    for _ in range(max_iter):
        hv = ns.h(x, v)
        if _max_abs(hv) < tol:
            return v
        J = ns.jac_h(x, v)
        if np.linalg.matrix_rank(J) < J.shape[0]:
            raise ProjectionError("constraint Jacobian is rank deficient")
        v = v - J.T @ np.linalg.solve(J @ J.T, hv)
    if _max_abs(ns.h(x, v)) > 1e-6:
        raise ProjectionError("projection stalled with |h| = %.3g" % _max_abs(ns.h(x, v)))
    return v


def integrate_along_curve(p, c, v0, project_onto=True, guard=PIVOT_GUARD, check=True):
    """Integrate dv/dt = sum_i d_i f_i(x0 + t d, v) from v(0) = v0."""
    ns = p if isinstance(p, NumericSystem) else NumericSystem(p, guard)
    v = np.array(v0, dtype=float)
    x0 = [float(a) for a in c.start]
    d = [float(a) for a in c.direction]
    if check:
        verdict = check_consistent_point(ns, x0, v)
        if not verdict:
            kind, what, val = verdict.violations[0]
            if kind == "inequation":
                raise PivotError("initial point violates an inequation", what, 0.0)
            raise ValueError("initial point violates constraint (residual %.3g)" % val)
    traj = Trajectory()

    def record(t, v):
        x = [a + t * b for a, b in zip(x0, d)]
        traj.samples.append((t, tuple(x), v.copy()))
        traj.drift.append(_max_abs(ns.h(x, v)))
        traj.pivot_margin.append(_min_abs(ns.g(x, v)))

    record(0.0, v)
    for k in range(c.steps):
        t = k * c.h
        v = rk4_step(ns, x0, d, t, v, c.h)
        if project_onto:
            v = project(ns, [a + (t + c.h) * b for a, b in zip(x0, d)], v)
        record((k + 1) * c.h, v)
    return traj


def check_flow_commutativity(p, x0, v0, h, i=0, j=1):
    """Commutator defect of one RK4 step along x_i and one along x_j.

    Returns |v_ij - v_ji|_max / h, the discrepancy per unit step: O(h^4) for
    compatible systems integrated with RK4 and O(h) when the flows do not commute.
    """
    ns = p if isinstance(p, NumericSystem) else NumericSystem(p)
    if ns.n < 2:
        raise ValueError("flow commutativity needs at least two independent variables")
    x0 = [float(a) for a in x0]
    v0 = np.array(v0, dtype=float)
    ei = [1.0 if k == i else 0.0 for k in range(ns.n)]
    ej = [1.0 if k == j else 0.0 for k in range(ns.n)]

    def step(start, e, v):
        return rk4_step(ns, start, e, 0.0, v, h)

    xi = [a + h * b for a, b in zip(x0, ei)]
    xj = [a + h * b for a, b in zip(x0, ej)]
    v_ij = step(xi, ej, step(x0, ei, v0))
    v_ji = step(xj, ei, step(x0, ej, v0))
    return _max_abs(v_ij - v_ji) / h
