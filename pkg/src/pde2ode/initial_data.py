"""Leading-derivative staircases, parametric derivatives and initial data."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .diffpoly import Derivative
from .errors import InfiniteDimensionalError


@dataclass(frozen=True)
class Staircase:
    """Minimal generators (multi-indices) of the lead ideal, per dependent variable."""
    generators: dict
    n_indep: int
    n_dep: int

    def __eq__(self, other):
        if not isinstance(other, Staircase):
            return NotImplemented
        norm = lambda s: {d: set(g) for d, g in s.generators.items() if g}
        return norm(self) == norm(other) and self.n_indep == other.n_indep

    def is_principal(self, d):
        return any(all(a <= b for a, b in zip(g, d.idx)) for g in self.generators.get(d.dep, ()))


@dataclass
class InitialData:
    parametric: list
    point_symbols: list
    constants: list
    constraints_among_parametric: list

    @property
    def dimension(self):
        return len(self.parametric)


def _minimal(indices):
    indices = sorted(set(indices), key=lambda t: (sum(t), t))
    out = []
    for t in indices:
        if not any(all(a <= b for a, b in zip(g, t)) for g in out):
            out.append(t)
    return out


def leading_set(f):
    """Staircase generated by the rule leads (constraint leads are excluded)."""
    n_dep = len(f.signature.dep_names)
    gens = {d: [] for d in range(n_dep)}
    for rule in f.rules:
        gens[rule.lead.dep].append(rule.lead.idx)
    return Staircase({d: tuple(_minimal(g)) for d, g in gens.items()},
                     f.signature.n_indep, n_dep)


def is_finite_dimensional(s):
    if s.n_dep == 0:
        return True
    for d in range(s.n_dep):
        gens = s.generators.get(d, ())
        for i in range(s.n_indep):
            if not any(sum(g) == g[i] for g in gens):
                return False
    return True


def listing_key(d):
    """Parametric listing: grouped by dependent variable, then by order, with
    x-derivatives before y-derivatives within an order."""
    return (d.dep, sum(d.idx), tuple(-a for a in d.idx))


def parametric_set(s):
    if not is_finite_dimensional(s):
        raise InfiniteDimensionalError("the lead staircase has an infinite complement")
    out = []
    for dep in range(s.n_dep):
        gens = s.generators.get(dep, ())
        bounds = []
        for i in range(s.n_indep):
            bounds.append(min(g[i] for g in gens if sum(g) == g[i]))
        for idx in product(*(range(b) for b in bounds)):
            d = Derivative(dep, tuple(idx))
            if not s.is_principal(d):
                out.append(d)
    return sorted(out, key=listing_key)


def parametric_derivatives(f):
    s = leading_set(f)
    params = parametric_set(s)
    pset = set(params)
    among = [c for c in f.constraints if c.derivatives() <= pset]
    points = [name + "_0" for name in f.signature.indep_names]
    consts = ["C_%d" % (k + 1) for k in range(len(params))]
    return InitialData(params, points, consts, among)
