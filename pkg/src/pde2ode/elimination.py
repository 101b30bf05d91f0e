"""Rankings, reduction modulo a solved system, and generic-case RIF completion."""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .diffpoly import (Derivative, DiffPolynomial, IndepVar, RationalExpr,
                       divide_exact, lex_key, mono_div, mono_divides,
                       total_derivative)
from .errors import InconsistentError, NoDerivativeError, NonTerminationError
from .parser import SystemSource

log = logging.getLogger(__name__)

COMPLETE = "complete"
CAPPED = "iteration_capped"


@dataclass(frozen=True)
class Ranking:
    """Graded ranking: order first, then lex on the multi-index, then dependent variable.

    ``indep_order`` lists independent-variable indices from most to least
    significant; ``dep_order`` lists dependent variables from highest to lowest.
    ``None`` means declaration order.
    """
    indep_order: tuple = None
    dep_order: tuple = None
    kind: str = "grlex"

    def key(self, v):
        if isinstance(v, IndepVar):
            return (0, v.index)
        idx = v.idx if self.indep_order is None else tuple(v.idx[j] for j in self.indep_order)
        dep = v.dep if self.dep_order is None else self.dep_order.index(v.dep)
        return (1, sum(v.idx), idx, -dep)

    def term_key(self, mono):
        return lex_key(mono, self.key)


DEFAULT_RANKING = Ranking()


def compare(a, b, r=DEFAULT_RANKING):
    """-1, 0 or 1 as a is lower than, equal to, or higher than b."""
    ka, kb = r.key(a), r.key(b)
    return (ka > kb) - (ka < kb)


def leading_derivative(p, r=DEFAULT_RANKING):
    ds = p.derivatives()
    if not ds:
        raise NoDerivativeError("polynomial contains no derivative")
    return max(ds, key=r.key)


def normalize_equation(p, r=DEFAULT_RANKING):
    return p.normalized(r.key)


def pivot_factors(p, r=DEFAULT_RANKING):
    """Split a pivot into normalized factors: one per variable of its monomial
    content plus the primitive remaining part.  Constants yield nothing."""
    if p.is_constant():
        return []
    g = p.monomial_content()
    out = [DiffPolynomial.var(v) for v, _ in g]
    rest = p.div_mono(g) if g else p
    if not rest.is_constant():
        out.append(rest.normalized(r.key))
    return out


@dataclass
class Rule:
    lead: Derivative
    rhs: RationalExpr
    pivot: DiffPolynomial

    @property
    def equation(self):
        """The rule as a polynomial: den*lead - num."""
        return self.rhs.den * DiffPolynomial.var(self.lead) - self.rhs.num


@dataclass
class RifForm:
    signature: object
    ranking: Ranking
    rules: list
    constraints: list
    inequations: list
    status: str = COMPLETE

    def rule_for(self, lead):
        for rule in self.rules:
            if rule.lead == lead:
                return rule
        return None


def _dpart_split(p):
    """Group terms by their derivative part: {dmono: coefficient in indep vars}."""
    out = {}
    for m, c in p.terms.items():
        dm = tuple(t for t in m if isinstance(t[0], Derivative))
        im = tuple(t for t in m if not isinstance(t[0], Derivative))
        out.setdefault(dm, {})[im] = c
    return {dm: DiffPolynomial(t) for dm, t in out.items()}


class Reducer:
    """Normal forms modulo solved rules (differentially) and constraints (algebraically)."""

    def __init__(self, ranking=DEFAULT_RANKING, rules=(), constraints=(), order_limit=None):
        self.ranking = ranking
        self.rules = {}
        self.constraints = []
        self._lead_terms = {}
        self._prolong = {}
        self.order_limit = order_limit
        for rule in rules:
            self.rules[rule.lead] = rule
        for c in constraints:
            self.add_constraint(c)

    # -- bookkeeping ------------------------------------------------------
    def add_constraint(self, c):
        self.constraints.append(c)
        self._lead_terms[c] = self._leading_dpart(c)

    def _leading_dpart(self, p):
        groups = _dpart_split(p)
        dm = max(groups, key=self.ranking.term_key)
        return dm, groups[dm]

    def rule_for(self, theta):
        """A rule whose lead is theta or has theta as a derivative."""
        best = None
        for lead, rule in self.rules.items():
            if lead.divides(theta):
                if best is None or self.ranking.key(lead) > self.ranking.key(best.lead):
                    best = rule
        return best

    def prolong(self, rule, theta):
        """D^(theta - lead) applied to the rule's equation."""
        eq = rule.equation
        key = (eq, theta)
        hit = self._prolong.get(key)
        if hit is not None:
            return hit
        if theta == rule.lead:
            result = eq
        else:
            i = next(j for j, (a, b) in enumerate(zip(rule.lead.idx, theta.idx)) if b > a)
            below = Derivative(theta.dep, theta.idx[:i] + (theta.idx[i] - 1,) + theta.idx[i + 1:])
            result = total_derivative(self.prolong(rule, below), i)
        self._prolong[key] = result
        return result

    # -- reduction --------------------------------------------------------
    def reduce_poly(self, p):
        """Return (num, den_factors, pivots) with p == num / prod(f**k)."""
        den = {}
        pivots = []
        start_order = p.max_order()
        while True:
            p = self._differential_step(p, den, pivots, start_order)
            p = self._algebraic_step(p, den, pivots)
            if not any(self.rule_for(d) for d in p.derivatives()):
                return p, den, pivots

    def _differential_step(self, p, den, pivots, start_order):
        key = self.ranking.key
        while True:
            principal = [(d, rule) for d in p.derivatives()
                         for rule in [self.rule_for(d)] if rule is not None]
            if not principal:
                return p
            theta, rule = max(principal, key=lambda t: key(t[0]))
            if self.order_limit is not None and theta.order > max(self.order_limit, start_order):
                raise NonTerminationError("derivative order %d exceeds limit" % theta.order)
            P = self.prolong(rule, theta)
            cs = P.coefficients_in(theta)
            init = cs.get(1)
            lower = -cs.get(0, DiffPolynomial())
            pcs = p.coefficients_in(theta)
            deg = max(pcs)
            acc = pcs[deg]
            for k in range(deg - 1, -1, -1):
                acc = acc * lower + pcs.get(k, DiffPolynomial()) * init ** (deg - k)
            p = acc
            self._multiply_den(init, deg, den, pivots)
            p = self._cancel(p, den)

    def _multiply_den(self, init, power, den, pivots):
        if init.is_constant():
            den[None] = den.get(None, Fraction(1)) * init.constant_value() ** power
            return
        g = init.monomial_content()
        rest = init.div_mono(g) if g else init
        for v, e in g:
            f = DiffPolynomial.var(v)
            den[f] = den.get(f, 0) + e * power
            if f not in pivots:
                pivots.append(f)
        if rest.is_constant():
            den[None] = den.get(None, Fraction(1)) * rest.constant_value() ** power
        else:
            f = rest.normalized(self.ranking.key)
            m = next(iter(f.terms))
            c = rest.terms[m] / f.terms[m]
            den[f] = den.get(f, 0) + power
            den[None] = den.get(None, Fraction(1)) * c ** power
            if f not in pivots:
                pivots.append(f)

    @staticmethod
    def _cancel(p, den):
        for f, k in list(den.items()):
            if f is None:
                continue
            while k and p:
                q = divide_exact(p, f)
                if q is None:
                    break
                p, k = q, k - 1
            if k:
                den[f] = k
            else:
                del den[f]
        return p

    def _algebraic_step(self, p, den, pivots):
        if not self.constraints or not p:
            return p
        term_key = self.ranking.term_key
        rem = DiffPolynomial()
        while p:
            groups = _dpart_split(p)
            dm = max(groups, key=term_key)
            lc = groups[dm]
            for c in self.constraints:
                cdm, clc = self._lead_terms[c]
                if mono_divides(cdm, dm):
                    q = mono_div(dm, cdm)
                    if clc.is_constant():
                        p = p - (c * lc).mul_mono(q, 1 / clc.constant_value())
                    else:
                        p = p * clc - (c * lc).mul_mono(q)
                        rem = rem * clc
                        self._multiply_den(clc, 1, den, pivots)
                    break
            else:
                lead_part = lc.mul_mono(dm)
                rem = rem + lead_part
                p = p - lead_part
        return self._cancel(rem, den)

    def normal_form(self, p):
        """Normal form of p as a RationalExpr, plus the pivots divided by."""
        num, den, pivots = self.reduce_poly(p)
        d = DiffPolynomial.constant(den.get(None, 1))
        for f, k in den.items():
            if f is not None:
                d = d * f ** k
        return RationalExpr(num, d), pivots


def reduce(p, f):
    """Normal form of p modulo a RifForm: (RationalExpr, pivots used)."""
    if isinstance(p, RationalExpr):
        num, used = reduce(p.num, f)
        den, used2 = reduce(p.den, f)
        return num / den, used + [u for u in used2 if u not in used]
    r = Reducer(f.ranking, f.rules, f.constraints)
    return r.normal_form(p)


def _lcm(a, b):
    return Derivative(a.dep, tuple(max(x, y) for x, y in zip(a.idx, b.idx)))


class _Completion:
    def __init__(self, src, ranking, cap):
        self.src = src
        self.ranking = ranking
        self.key = ranking.key
        self.limit = src.max_order + cap
        self.reducer = Reducer(ranking)
        self.inequations = []
        self.capped = False
        self.processed = set()
        self.queue = deque()
        for g in src.inequations:
            self._add_pivots(pivot_factors(g, ranking))

    def _add_pivots(self, fs):
        for f in fs:
            if f not in self.inequations:
                self.inequations.append(f)

    def _strip_pivots(self, p):
        for f in self.inequations:
            while True:
                q = divide_exact(p, f)
                if q is None or q.is_constant():
                    break
                p = q
        return p

    def run(self):
        self.queue.extend(self.src.equations)
        while True:
            while self.queue:
                self._process(self.queue.popleft())
            if not self._integrability():
                break
        rules = sorted(self.reducer.rules.values(), key=lambda r: self.key(r.lead), reverse=True)
        constraints = sorted(self.reducer.constraints,
                             key=lambda c: self.ranking.term_key(c.leading_term(self.key)[0]),
                             reverse=True)
        return rules, constraints

    def _process(self, q):
        num, den, used = self.reducer.reduce_poly(q)
        self._add_pivots(used)
        if not num:
            return
        num = self._strip_pivots(num)
        if not num.derivatives():
            raise InconsistentError("the system reduces to the nonzero relation %r" % (num,))
        num = num.normalized(self.key)
        lead = leading_derivative(num, self.ranking)
        if num.degree(lead) == 1:
            self._add_rule(num, lead)
        else:
            self._add_constraint(num, lead)

    def _displace(self, pred_rule, pred_con):
        """Remove rules/constraints that must be re-derived; queue their equations."""
        red = self.reducer
        for lead, rule in list(red.rules.items()):
            if pred_rule(rule):
                del red.rules[lead]
                self.queue.append(rule.equation)
        keep = []
        for c in red.constraints:
            if pred_con(c):
                self.queue.append(c)
            else:
                keep.append(c)
        red.constraints = []
        for c in keep:
            red.add_constraint(c)

    def _add_rule(self, num, lead):
        cs = num.coefficients_in(lead)
        init = cs[1]
        rest = cs.get(0, DiffPolynomial())
        self._add_pivots(pivot_factors(init, self.ranking))
        rule = Rule(lead, RationalExpr(-rest, init), init.normalized(self.key))
        self._displace(
            lambda r: lead.divides(r.lead) or any(lead.divides(d) for d in r.rhs.derivatives()),
            lambda c: any(lead.divides(d) for d in c.derivatives()))
        self.reducer.rules[lead] = rule
        log.debug("rule %r", lead)

    def _add_constraint(self, num, lead):
        red = self.reducer
        dm, _ = red._leading_dpart(num)
        def reducible(p):
            return any(mono_divides(dm, m) for m in _dpart_split(p))
        self._displace(lambda r: reducible(r.rhs.num), reducible)
        for other in red.constraints:
            self.queue.append(self._spoly(num, other))
        red.add_constraint(num)
        for i in range(len(lead.idx)):
            if lead.order + 1 > self.limit:
                self.capped = True
                continue
            self.queue.append(total_derivative(num, i))

    def _spoly(self, a, b):
        red = self.reducer
        am, alc = red._leading_dpart(a)
        bm, blc = red._leading_dpart(b)
        lcm = dict(am)
        for v, e in bm:
            lcm[v] = max(lcm.get(v, 0), e)
        lcm = tuple(sorted(lcm.items()))
        return (a * blc).mul_mono(mono_div(lcm, am)) - (b * alc).mul_mono(mono_div(lcm, bm))

    def _integrability(self):
        rules = sorted(self.reducer.rules.values(), key=lambda r: self.key(r.lead))
        added = False
        for ia, a in enumerate(rules):
            for b in rules[ia + 1:]:
                if a.lead.dep != b.lead.dep:
                    continue
                pair = frozenset((a.equation, b.equation))
                if pair in self.processed:
                    continue
                theta = _lcm(a.lead, b.lead)
                if self._chain_skip(a, b, theta, rules):
                    continue
                self.processed.add(pair)
                if theta.order > self.limit:
                    self.capped = True
                    continue
                pa = self.reducer.prolong(a, theta)
                pb = self.reducer.prolong(b, theta)
                cond = pa * pb.coeff(theta, 1) - pb * pa.coeff(theta, 1)
                num, _, used = self.reducer.reduce_poly(cond)
                self._add_pivots(used)
                if num:
                    self.queue.append(num)
                    added = True
        return added

    @staticmethod
    def _chain_skip(a, b, theta, rules):
        for c in rules:
            if c is a or c is b or c.lead.dep != theta.dep or not c.lead.divides(theta):
                continue
            if _lcm(a.lead, c.lead) != theta and _lcm(b.lead, c.lead) != theta:
                return True
        return False


def rif(src, ranking=DEFAULT_RANKING, prolongation_cap=4):
    """Generic-case RIF completion of a system source."""
    comp = _Completion(src, ranking, prolongation_cap)
    rules, constraints = comp.run()
    status = CAPPED if comp.capped else COMPLETE
    if comp.capped:
        log.warning("prolongation cap reached; RIF form may be incomplete")
    return RifForm(src.signature, ranking, rules, constraints, list(comp.inequations), status)


CONSISTENT = "consistent"
INCONSISTENT = "inconsistent"
UNKNOWN = "unknown"


def probe_pivot_case(src, pivot, ranking=DEFAULT_RANKING, prolongation_cap=4):
    """Consistency verdict for the branch where ``pivot`` vanishes (depth 1)."""
    branch = SystemSource(src.signature, list(src.equations) + [pivot],
                          [g for g in src.inequations if g != pivot], dict(src.options))
    try:
        f = rif(branch, ranking, prolongation_cap)
    except InconsistentError:
        return INCONSISTENT
    if f.status == CAPPED:
        return UNKNOWN
    return CONSISTENT
