"""Structure constants of a finite-dimensional Lie algebra of symmetry vector fields.

The basis field X_i is the solution of the (linear) RIF form whose initial
data at the expansion point is the i-th unit vector.  Brackets are formed
symbolically, reduced to parametric derivatives and evaluated at the point,
so no ODE is ever integrated.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .diffpoly import (Derivative, DiffPolynomial, IndepVar, RationalExpr,
                       evaluate, total_derivative)
from .elimination import Reducer, Rule
from .errors import DivisionByZeroError, PivotAtPointError


def parse_vector_field(text, signature):
    """``"xi:x,eta:y"`` -> {dep index: indep index}."""
    out = {}
    for part in text.split(","):
        dep, _, var = part.partition(":")
        dep, var = dep.strip(), var.strip()
        if dep not in signature.dep_names or var not in signature.indep_names:
            raise ValueError("bad vector field slot %r" % part)
        out[signature.dep_names.index(dep)] = signature.indep_names.index(var)
    return out


def parse_point(text, signature):
    """``"x0=0,y0=2"`` (or ``"x=0,y=2"``) -> {indep index: Fraction}."""
    out = {}
    for part in text.split(","):
        name, _, val = part.partition("=")
        name = name.strip()
        if name.endswith("_0"):
            name = name[:-2]
        elif name.endswith("0") and name[:-1] in signature.indep_names:
            name = name[:-1]
        if name not in signature.indep_names:
            raise ValueError("unknown point coordinate %r" % part)
        out[signature.indep_names.index(name)] = Fraction(val.strip())
    if len(out) != signature.n_indep:
        raise ValueError("the point must give every independent variable")
    return out


@dataclass
class StructureConstants:
    """c[i][j][k] with [X_i, X_j] = sum_k c[i][j][k] X_k, exact at ``point``."""
    c: list
    basis: list = None
    point: dict = None

    @property
    def dim(self):
        return len(self.c)

    def bracket(self, u, v):
        m = self.dim
        out = [Fraction(0)] * m
        for i in range(m):
            if not u[i]:
                continue
            for j in range(m):
                if not v[j]:
                    continue
                w = u[i] * v[j]
                row = self.c[i][j]
                for k in range(m):
                    if row[k]:
                        out[k] += w * row[k]
        return out

    @classmethod
    def from_brackets(cls, m, brackets):
        """Build from {(i, j): {k: coeff}} with 1-based indices; antisymmetry implied."""
        c = [[[Fraction(0)] * m for _ in range(m)] for _ in range(m)]
        for (i, j), vec in brackets.items():
            for k, val in vec.items():
                c[i - 1][j - 1][k - 1] = Fraction(val)
                c[j - 1][i - 1][k - 1] = -Fraction(val)
        return cls(c)


def _shift(p, offset):
    out = {}
    for mono, coeff in p.terms.items():
        nm = tuple(sorted(((Derivative(v.dep + offset, v.idx) if isinstance(v, Derivative) else v), e)
                          for v, e in mono))
        out[nm] = coeff
    return DiffPolynomial(out)


def _shift_rule(rule, offset):
    return Rule(Derivative(rule.lead.dep + offset, rule.lead.idx),
                RationalExpr(_shift(rule.rhs.num, offset), _shift(rule.rhs.den, offset), reduce=False),
                _shift(rule.pivot, offset))


def structure_constants(f, data, vf, point, basis=None):
    """Structure constants of the symmetry algebra of the linear RIF form ``f``.

    ``vf`` maps dependent-variable index -> independent-variable slot,
    ``point`` maps independent-variable index -> exact value and ``basis``
    optionally reorders the parametric derivatives (default: ``data.parametric``).
    """
    sig = f.signature
    nd, n = len(sig.dep_names), sig.n_indep
    if sorted(vf.values()) != list(range(n)) or sorted(vf) != list(range(nd)):
        raise ValueError("the vector field must assign one dependent variable per slot")
    basis = list(basis or data.parametric)
    if set(basis) != set(data.parametric):
        raise ValueError("basis must be a permutation of the parametric derivatives")
    values = {IndepVar(i): Fraction(v) for i, v in point.items()}
    for g in f.inequations:
        if not g.derivatives() and g.evaluate(values) == 0:
            raise PivotAtPointError("inequation vanishes at the expansion point")

    rules = list(f.rules) + [_shift_rule(r, nd) for r in f.rules]
    red = Reducer(f.ranking, rules, ())
    slot_dep = {s: d for d, s in vf.items()}
    zero = (0,) * n

    def coeff(dep, offset):
        return DiffPolynomial.var(Derivative(dep + offset, zero))

    # [A, B]_k = sum_l (a_l D_l b_k - b_l D_l a_k)
    comps = []
    for k in range(nd):
        ck = DiffPolynomial()
        for l in range(n):
            dl = slot_dep[l]
            ck = ck + coeff(dl, 0) * total_derivative(coeff(k, nd), l)
            ck = ck - coeff(dl, nd) * total_derivative(coeff(k, 0), l)
        comps.append(ck)

    forms = []
    for theta in basis:
        p = comps[theta.dep]
        for i, times in enumerate(theta.idx):
            for _ in range(times):
                p = total_derivative(p, i)
        forms.append(red.normal_form(p)[0])

    m = len(basis)
    c = [[[Fraction(0)] * m for _ in range(m)] for _ in range(m)]
    for i in range(m):
        for j in range(m):
            if i == j:
                continue
            env = {}
            for r, theta in enumerate(basis):
                env[theta] = Fraction(1 if r == i else 0)
                env[Derivative(theta.dep + nd, theta.idx)] = Fraction(1 if r == j else 0)
            for r, form in enumerate(forms):
                try:
                    c[i][j][r] = Fraction(evaluate(form, env, values))
                except DivisionByZeroError:
                    raise PivotAtPointError("a pivot vanishes at the expansion point")
    return StructureConstants(c, basis, dict(point))


def _row_reduce(vectors):
    """Reduced row echelon basis (exact) of the span of ``vectors``."""
    rows = [list(v) for v in vectors if any(v)]
    basis = []
    pivots = []
    for v in rows:
        v = list(v)
        for b, p in zip(basis, pivots):
            if v[p]:
                f = v[p]
                v = [x - f * y for x, y in zip(v, b)]
        if any(v):
            p = next(k for k, x in enumerate(v) if x)
            v = [x / v[p] for x in v]
            for idx, b in enumerate(basis):
                if b[p]:
                    f = b[p]
                    basis[idx] = [x - f * y for x, y in zip(b, v)]
            basis.append(v)
            pivots.append(p)
    return basis


def derived_algebra(sc):
    vecs = [sc.c[i][j] for i in range(sc.dim) for j in range(i + 1, sc.dim)]
    return _row_reduce(vecs)


def derived_algebra_dimension(sc):
    return len(derived_algebra(sc))


def is_derived_abelian(sc):
    d = derived_algebra(sc)
    return all(not any(sc.bracket(u, v)) for a, u in enumerate(d) for v in d[a + 1:])


def linearizability_verdict(sc, order):
    """Point-linearizability test for an ODE of the given order."""
    return derived_algebra_dimension(sc) == order and is_derived_abelian(sc)


def antisymmetry_defect(sc):
    m = sc.dim
    return [(i, j) for i in range(m) for j in range(m)
            if any(a + b for a, b in zip(sc.c[i][j], sc.c[j][i]))]


def jacobi_defect(sc):
    """Triples (i, j, k) violating the Jacobi identity."""
    m = sc.dim
    e = [[Fraction(int(a == b)) for a in range(m)] for b in range(m)]
    bad = []
    for i in range(m):
        for j in range(i + 1, m):
            for k in range(j + 1, m):
                s = [x + y + z for x, y, z in zip(
                    sc.bracket(sc.c[i][j], e[k]),
                    sc.bracket(sc.c[j][k], e[i]),
                    sc.bracket(sc.c[k][i], e[j]))]
                if any(s):
                    bad.append((i, j, k))
    return bad
