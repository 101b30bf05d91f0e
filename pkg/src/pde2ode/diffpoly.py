"""Exact differential polynomials and rational differential expressions.

Indeterminates are either derivatives of dependent variables, encoded by a
multi-index so that mixed partials commute by construction, or independent
variables.  Coefficients are :class:`fractions.Fraction`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import NamedTuple, Union

from .errors import DivisionByZeroError

Rational = Fraction


class Derivative(NamedTuple):
    dep: int
    idx: tuple

    @property
    def order(self):
        return sum(self.idx)

    def diff(self, i, times=1):
        idx = list(self.idx)
        idx[i] += times
        return Derivative(self.dep, tuple(idx))

    def divides(self, other):
        """True if ``other`` is this derivative or a derivative of it."""
        return self.dep == other.dep and all(a <= b for a, b in zip(self.idx, other.idx))


class IndepVar(NamedTuple):
    index: int


Var = Union[Derivative, IndepVar]


@dataclass(frozen=True)
class SystemSignature:
    indep_names: tuple
    dep_names: tuple

    def __post_init__(self):
        names = list(self.indep_names) + list(self.dep_names)
        if not self.indep_names:
            raise ValueError("at least one independent variable is required")
        if len(set(names)) != len(names):
            raise ValueError("variable names must be unique")

    @property
    def n_indep(self):
        return len(self.indep_names)

    def derivative(self, dep, *indeps):
        """``sig.derivative("u", "x", "y")`` -> Derivative for u_xy."""
        d = self.dep_names.index(dep) if isinstance(dep, str) else dep
        idx = [0] * self.n_indep
        for v in indeps:
            idx[self.indep_names.index(v) if isinstance(v, str) else v] += 1
        return Derivative(d, tuple(idx))

    def derivative_name(self, d):
        """Subscript-word name such as ``u_xy`` or ``eta``."""
        word = "".join(self.indep_names[i] * k for i, k in enumerate(d.idx))
        base = self.dep_names[d.dep]
        return base + "_" + word if word else base

    def var_name(self, v):
        if isinstance(v, IndepVar):
            return self.indep_names[v.index]
        return self.derivative_name(v)


# --- monomials: sorted tuples of (var, exponent) ---------------------------

ONE_MONO = ()


def mono_mul(a, b):
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def mono_divides(a, b):
    db = dict(b)
    return all(db.get(v, 0) >= e for v, e in a)


def mono_div(a, b):
    """a / b, assuming b divides a."""
    d = dict(a)
    for v, e in b:
        r = d[v] - e
        if r:
            d[v] = r
        else:
            del d[v]
    return tuple(sorted(d.items()))


def mono_gcd(a, b):
    db = dict(b)
    return tuple((v, min(e, db[v])) for v, e in a if v in db)


def default_var_key(v):
    """Key of the default ranking: grlex on derivatives, independent variables lowest."""
    if isinstance(v, IndepVar):
        return (0, v.index)
    return (1, sum(v.idx), v.idx, -v.dep)


def lex_key(mono, var_key=default_var_key):
    """Lexicographic term order with variables compared by ``var_key``."""
    return tuple(sorted(((var_key(v), e) for v, e in mono), reverse=True))


def _frac(c):
    return c if isinstance(c, Fraction) else Fraction(c)


class DiffPolynomial:
    """Immutable sparse polynomial: mapping monomial -> nonzero Fraction."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None):
        if terms is None:
            terms = {}
        self.terms = {m: _frac(c) for m, c in terms.items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, terms):
        p = object.__new__(cls)
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def constant(cls, c):
        c = _frac(c)
        return cls._raw({ONE_MONO: c} if c else {})

    @classmethod
    def var(cls, v, exp=1):
        return cls._raw({((v, exp),): Fraction(1)})

    @classmethod
    def monomial(cls, mono, coeff=1):
        return cls._raw({mono: _frac(coeff)} if coeff else {})

    # -- structure --------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if isinstance(other, DiffPolynomial):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == ({ONE_MONO: Fraction(other)} if other else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __repr__(self):
        return "DiffPolynomial(%r)" % (self.terms,)

    def variables(self):
        out = set()
        for m in self.terms:
            out.update(v for v, _ in m)
        return out

    def derivatives(self):
        return {v for v in self.variables() if isinstance(v, Derivative)}

    def indep_vars(self):
        return {v for v in self.variables() if isinstance(v, IndepVar)}

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and ONE_MONO in self.terms)

    def constant_value(self):
        return self.terms.get(ONE_MONO, Fraction(0))

    def degree(self, v):
        return max((dict(m).get(v, 0) for m in self.terms), default=0)

    def total_degree(self):
        return max((sum(e for _, e in m) for m in self.terms), default=0)

    def max_order(self):
        return max((d.order for d in self.derivatives()), default=-1)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, DiffPolynomial):
            other = DiffPolynomial.constant(other)
        if len(self.terms) < len(other.terms):
            small, big = self.terms, other.terms
        else:
            small, big = other.terms, self.terms
        out = dict(big)
        for m, c in small.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return DiffPolynomial._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return DiffPolynomial._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, DiffPolynomial):
            other = DiffPolynomial.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, DiffPolynomial):
            c = _frac(other)
            if not c:
                return DiffPolynomial()
            return DiffPolynomial._raw({m: v * c for m, v in self.terms.items()})
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return DiffPolynomial._raw(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative exponent")
        result = DiffPolynomial.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def mul_mono(self, mono, coeff=1):
        coeff = _frac(coeff)
        return DiffPolynomial._raw({mono_mul(m, mono): c * coeff for m, c in self.terms.items()})

    # -- coefficient access -----------------------------------------------
    def coefficients_in(self, v):
        """Return {k: coefficient of v**k} with coefficients free of v."""
        out = {}
        for m, c in self.terms.items():
            k = 0
            rest = []
            for w, e in m:
                if w == v:
                    k = e
                else:
                    rest.append((w, e))
            out.setdefault(k, {})[tuple(rest)] = c
        return {k: DiffPolynomial._raw(t) for k, t in out.items()}

    def coeff(self, v, k):
        return self.coefficients_in(v).get(k, DiffPolynomial())

    def partial(self, v):
        """Algebraic partial derivative with respect to the indeterminate v."""
        out = {}
        for m, c in self.terms.items():
            for j, (w, e) in enumerate(m):
                if w == v:
                    nm = m[:j] + (((w, e - 1),) if e > 1 else ()) + m[j + 1:]
                    out[nm] = out.get(nm, 0) + c * e
                    break
        return DiffPolynomial({m: c for m, c in out.items() if c})

    def subs(self, v, value):
        """Substitute the polynomial ``value`` for the indeterminate ``v``."""
        coeffs = self.coefficients_in(v)
        result = DiffPolynomial()
        for k in sorted(coeffs, reverse=True):
            result = result + coeffs[k] * value ** k
        return result

    def content(self):
        """Positive rational c with self/c having coprime integer coefficients."""
        if not self.terms:
            return Fraction(1)
        num = 0
        den = 1
        for c in self.terms.values():
            num = gcd(num, c.numerator)
            den = den * c.denominator // gcd(den, c.denominator)
        return Fraction(num, den)

    def leading_term(self, var_key=default_var_key):
        m = max(self.terms, key=lambda t: lex_key(t, var_key))
        return m, self.terms[m]

    def normalized(self, var_key=default_var_key):
        """Primitive associate with positive leading coefficient."""
        if not self.terms:
            return self
        c = self.content()
        if self.leading_term(var_key)[1] < 0:
            c = -c
        if c == 1:
            return self
        return DiffPolynomial._raw({m: v / c for m, v in self.terms.items()})

    def monomial_content(self):
        it = iter(self.terms)
        g = next(it, ONE_MONO)
        for m in it:
            if not g:
                break
            g = mono_gcd(g, m)
        return g

    def div_mono(self, mono):
        return DiffPolynomial._raw({mono_div(m, mono): c for m, c in self.terms.items()})

    def evaluate(self, values):
        total = 0
        for m, c in self.terms.items():
            t = c
            for v, e in m:
                t = t * values[v] ** e
            total = total + t
        return total


def total_derivative(p, i):
    """Total derivative D_i of a differential polynomial."""
    out = {}
    for m, c in p.terms.items():
        for j, (v, e) in enumerate(m):
            if isinstance(v, IndepVar):
                if v.index != i:
                    continue
                dv = None
            else:
                dv = v.diff(i)
            rest = dict(m[:j] + m[j + 1:])
            if e > 1:
                rest[v] = e - 1
            if dv is not None:
                rest[dv] = rest.get(dv, 0) + 1
            nm = tuple(sorted(rest.items()))
            s = out.get(nm, 0) + c * e
            if s:
                out[nm] = s
            else:
                out.pop(nm, None)
    return DiffPolynomial._raw(out)


def divide_exact(p, g):
    """Return q with p == q*g, or None when g does not divide p."""
    if not g:
        raise DivisionByZeroError("division by the zero polynomial")
    if not p:
        return DiffPolynomial()
    if g.is_constant():
        return p * (1 / g.constant_value())
    glm, glc = g.leading_term()
    q = {}
    r = p
    while r:
        lm, lc = r.leading_term()
        if not mono_divides(glm, lm):
            return None
        qm = mono_div(lm, glm)
        qc = lc / glc
        q[qm] = qc
        r = r - g.mul_mono(qm, qc)
    return DiffPolynomial._raw(q)


def _univariate_gcd(a, b, v):
    """Monic gcd of two polynomials in the single indeterminate v."""
    def as_list(p):
        cs = p.coefficients_in(v)
        n = max(cs)
        return [cs.get(k, DiffPolynomial()).constant_value() for k in range(n + 1)]

    def strip(xs):
        while xs and xs[-1] == 0:
            xs.pop()
        return xs

    x, y = strip(as_list(a)), strip(as_list(b))
    while y:
        r = list(x)
        while len(r) >= len(y) and r:
            f = r[-1] / y[-1]
            shift = len(r) - len(y)
            for k, c in enumerate(y):
                r[k + shift] -= f * c
            strip(r)
        x, y = y, r
    lead = x[-1]
    return sum((DiffPolynomial.var(v, k) * (c / lead) if k else DiffPolynomial.constant(c / lead)
                for k, c in enumerate(x) if c), DiffPolynomial())


class RationalExpr:
    """Quotient num/den of differential polynomials, best-effort reduced."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, reduce=True):
        if not isinstance(num, DiffPolynomial):
            num = DiffPolynomial.constant(num)
        if den is None:
            den = DiffPolynomial.constant(1)
        elif not isinstance(den, DiffPolynomial):
            den = DiffPolynomial.constant(den)
        if not den:
            raise DivisionByZeroError("zero denominator")
        if reduce:
            num, den = _cancel(num, den)
        self.num = num
        self.den = den

    @classmethod
    def lift(cls, x):
        return x if isinstance(x, RationalExpr) else cls(x)

    def __repr__(self):
        return "RationalExpr(%r, %r)" % (self.num, self.den)

    def is_zero(self):
        return not self.num

    def is_polynomial(self):
        return self.den == 1

    def __eq__(self, other):
        if not isinstance(other, RationalExpr):
            if isinstance(other, (DiffPolynomial, int, Fraction)):
                other = RationalExpr(other)
            else:
                return NotImplemented
        return self.num * other.den == other.num * self.den

    __hash__ = None

    def __add__(self, other):
        other = RationalExpr.lift(other)
        if self.den == other.den:
            return RationalExpr(self.num + other.num, self.den)
        return RationalExpr(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalExpr(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        return self + (-RationalExpr.lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = RationalExpr.lift(other)
        return RationalExpr(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = RationalExpr.lift(other)
        if not other.num:
            raise DivisionByZeroError("division by zero expression")
        return RationalExpr(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return RationalExpr.lift(other) / self

    def __pow__(self, n):
        if n < 0:
            return RationalExpr(self.den ** -n, self.num ** -n)
        return RationalExpr(self.num ** n, self.den ** n)

    def variables(self):
        return self.num.variables() | self.den.variables()

    def derivatives(self):
        return self.num.derivatives() | self.den.derivatives()

    def partial(self, v):
        dn, dd = self.num.partial(v), self.den.partial(v)
        if not dd:
            return RationalExpr(dn, self.den)
        return RationalExpr(dn * self.den - self.num * dd, self.den * self.den)

    def total_derivative(self, i):
        dn, dd = total_derivative(self.num, i), total_derivative(self.den, i)
        if not dd:
            return RationalExpr(dn, self.den)
        return RationalExpr(dn * self.den - self.num * dd, self.den * self.den)


def _cancel(num, den):
    if not num:
        return num, DiffPolynomial.constant(1)
    g = mono_gcd(num.monomial_content(), den.monomial_content())
    if g:
        num, den = num.div_mono(g), den.div_mono(g)
    scale = den.content()
    if den.leading_term()[1] < 0:
        scale = -scale
    if scale != 1:
        num, den = num * (1 / scale), den * (1 / scale)
    if den.is_constant():
        return num, den
    q = divide_exact(num, den)
    if q is not None:
        return q, DiffPolynomial.constant(1)
    vs = num.variables() | den.variables()
    if len(vs) == 1:
        v = next(iter(vs))
        h = _univariate_gcd(num, den, v)
        if not h.is_constant():
            num, den = divide_exact(num, h), divide_exact(den, h)
            scale = den.content()
            if den.leading_term()[1] < 0:
                scale = -scale
            num, den = num * (1 / scale), den * (1 / scale)
    return num, den


def evaluate(e, point, indep=None, tol=1e-12):
    """Value of a RationalExpr (or polynomial) at a point.

    ``point`` maps Derivative -> number, ``indep`` maps IndepVar or index ->
    number.  Exact inputs give an exact result.
    """
    values = dict(point)
    for k, val in (indep or {}).items():
        values[k if isinstance(k, IndepVar) else IndepVar(k)] = val
    if isinstance(e, DiffPolynomial):
        return e.evaluate(values)
    d = e.den.evaluate(values)
    if isinstance(d, Fraction) or isinstance(d, int):
        if d == 0:
            raise DivisionByZeroError("denominator vanishes at the point")
    elif abs(d) <= tol:
        raise DivisionByZeroError("denominator vanishes at the point (|den| = %g)" % abs(d))
    return e.num.evaluate(values) / d
