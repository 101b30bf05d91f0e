"""Recursive-descent parser for ``.pde`` system sources.

Grammar (statements end with ``;``, ``#`` starts a line comment)::

    vars x, y;
    funcs u(x, y), v(x, y);
    eq <expr> [= <expr>];
    ineq <expr>;

Expressions use ``+ - * / ^`` with ``^`` binding tightest, then unary minus,
then ``* /``, then binary ``+ -``.  ``diff(u, x, x, y)`` and
``diff(u, x$2, y)`` both denote u_xxy.  A file without ``funcs`` is a
polynomial system in the declared variables.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .diffpoly import (Derivative, DiffPolynomial, IndepVar, RationalExpr,
                       SystemSignature)
from .errors import BadArityError, ParseError, UnknownSymbolError

_TOKEN = re.compile(r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<num>\d+(?:\.\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^(),;=$])
""", re.VERBOSE)

KEYWORDS = {"vars", "funcs", "eq", "ineq"}


@dataclass
class SystemSource:
    signature: SystemSignature
    equations: list
    inequations: list = field(default_factory=list)
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.equations:
            raise ValueError("a system needs at least one equation")

    def __eq__(self, other):
        if not isinstance(other, SystemSource):
            return NotImplemented
        return (self.signature == other.signature
                and self.equations == other.equations
                and set(self.inequations) == set(other.inequations)
                and self.options == other.options)

    @property
    def max_order(self):
        return max(p.max_order() for p in self.equations)


def tokenize(text):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError("unexpected character %r" % text[pos], pos)
        kind = m.lastgroup
        if kind != "ws":
            out.append((kind, m.group(kind), pos))
        pos = m.end()
    out.append(("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, text, indep=None, deps=None):
        self.toks = tokenize(text)
        self.i = 0
        self.indep = list(indep or [])
        self.deps = dict(deps or {})  # name -> list of indep names

    # -- token helpers ----------------------------------------------------
    @property
    def tok(self):
        return self.toks[self.i]

    def advance(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, value):
        kind, text, pos = self.tok
        if text != value or kind == "num":
            raise ParseError("unexpected %r" % (text or "end of input"), pos, repr(value))
        return self.advance()

    def expect_name(self):
        kind, text, pos = self.tok
        if kind != "name":
            raise ParseError("unexpected %r" % (text or "end of input"), pos, "identifier")
        self.advance()
        return text, pos

    def accept(self, value):
        if self.tok[1] == value and self.tok[0] == "op":
            self.advance()
            return True
        return False

    # -- statements -------------------------------------------------------
    def names(self):
        out = [self.expect_name()[0]]
        while self.accept(","):
            out.append(self.expect_name()[0])
        return out

    def program(self):
        eqs, ineqs = [], []
        while self.tok[0] != "eof":
            kw, pos = self.expect_name()
            if kw == "vars":
                if self.indep:
                    raise ParseError("duplicate vars statement", pos)
                self.indep = self.names()
            elif kw == "funcs":
                if self.deps:
                    raise ParseError("duplicate funcs statement", pos)
                if not self.indep:
                    raise ParseError("funcs before vars", pos)
                while True:
                    name, npos = self.expect_name()
                    self.expect("(")
                    args = self.names()
                    self.expect(")")
                    for a in args:
                        if a not in self.indep:
                            raise UnknownSymbolError("unknown variable %r" % a, npos)
                    if sorted(args) != sorted(self.indep):
                        raise BadArityError("function %r must depend on all of %s"
                                            % (name, ", ".join(self.indep)), npos)
                    self.deps[name] = args
                    if not self.accept(","):
                        break
            elif kw == "eq":
                lhs = self.expr()
                if self.accept("="):
                    lhs = lhs - self.expr()
                eqs.append(lhs)
            elif kw == "ineq":
                ineqs.append(self.expr())
            else:
                raise ParseError("unknown statement %r" % kw, pos, "vars, funcs, eq or ineq")
            self.expect(";")
        return eqs, ineqs

    # -- expressions ------------------------------------------------------
    def expr(self):
        value = self.term()
        while True:
            if self.accept("+"):
                value = value + self.term()
            elif self.accept("-"):
                value = value - self.term()
            else:
                return value

    def term(self):
        value = self.unary()
        while True:
            if self.accept("*"):
                value = value * self.unary()
            elif self.accept("/"):
                value = value / self.unary()
            else:
                return value

    def unary(self):
        if self.accept("-"):
            return -self.unary()
        if self.accept("+"):
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.accept("^"):
            kind, text, pos = self.tok
            if kind != "num" or not text.isdigit():
                raise ParseError("exponent must be a nonnegative integer", pos, "integer")
            self.advance()
            base = base ** int(text)
        return base

    def atom(self):
        kind, text, pos = self.tok
        if kind == "num":
            self.advance()
            return RationalExpr(Fraction(text))
        if kind == "name":
            self.advance()
            if text == "diff":
                return RationalExpr(DiffPolynomial.var(self.diff_args(pos)))
            if text in self.indep:
                return RationalExpr(DiffPolynomial.var(IndepVar(self.indep.index(text))))
            if text in self.deps:
                d = Derivative(self.dep_index(text), (0,) * len(self.indep))
                return RationalExpr(DiffPolynomial.var(d))
            raise UnknownSymbolError("unknown symbol %r" % text, pos)
        if self.accept("("):
            value = self.expr()
            self.expect(")")
            return value
        raise ParseError("unexpected %r" % (text or "end of input"), pos, "expression")

    def dep_index(self, name):
        return list(self.deps).index(name)

    def diff_args(self, pos):
        self.expect("(")
        fname, fpos = self.expect_name()
        if fname not in self.deps:
            if fname in self.indep:
                raise BadArityError("diff applied to variable %r" % fname, fpos)
            raise UnknownSymbolError("unknown function %r" % fname, fpos)
        idx = [0] * len(self.indep)
        while self.accept(","):
            vname, vpos = self.expect_name()
            if vname not in self.indep:
                raise UnknownSymbolError("unknown variable %r" % vname, vpos)
            count = 1
            if self.accept("$"):
                kind, text, cpos = self.tok
                if kind != "num" or not text.isdigit():
                    raise ParseError("repetition count must be an integer", cpos, "integer")
                self.advance()
                count = int(text)
            idx[self.indep.index(vname)] += count
        self.expect(")")
        return Derivative(self.dep_index(fname), tuple(idx))


def _split(exprs):
    """Numerators as equations; nonconstant denominators as inequations."""
    eqs, dens = [], []
    for e in exprs:
        eqs.append(e.num)
        if not e.den.is_constant():
            dens.append(e.den)
    return eqs, dens


def parse_system(text):
    """Parse a differential system source into a :class:`SystemSource`."""
    p = _Parser(text)
    eqs, ineqs = p.program()
    if not p.indep:
        raise ParseError("missing vars statement", 0, "vars")
    if not p.deps:
        raise ParseError("missing funcs statement", 0, "funcs")
    if not eqs:
        raise ParseError("no equations", len(text), "eq")
    sig = SystemSignature(tuple(p.indep), tuple(p.deps))
    equations, dens = _split(eqs)
    inequations = [e.num for e in ineqs] + dens
    return SystemSource(sig, equations, inequations)


def parse_polynomial_system(text):
    """Parse a polynomial system (no ``funcs``).  Returns (names, polynomials)."""
    p = _Parser(text)
    eqs, _ = p.program()
    if p.deps:
        raise ParseError("polynomial systems must not declare funcs", 0)
    if not p.indep:
        raise ParseError("missing vars statement", 0, "vars")
    if not eqs:
        raise ParseError("no equations", len(text), "eq")
    polys = []
    for e in eqs:
        if not e.den.is_constant():
            raise ParseError("polynomial systems cannot divide by variables", 0)
        polys.append(e.num * (1 / e.den.constant_value()))
    return tuple(p.indep), polys


def parse_expr(text, signature):
    """Parse a single expression against a known signature."""
    deps = {name: list(signature.indep_names) for name in signature.dep_names}
    p = _Parser(text, signature.indep_names, deps)
    value = p.expr()
    if p.tok[0] != "eof":
        raise ParseError("trailing input", p.tok[2], "end of expression")
    return value
