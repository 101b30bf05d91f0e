"""Zero-dimensional polynomial systems through the x_j <-> d/dx_j correspondence.

A polynomial ideal becomes a constant-coefficient linear PDE system for one
function u.  Its parametric derivatives form a basis of the quotient ring and
the per-variable ODE systems are multiplication matrices; their joint
eigenvectors give the roots.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import eigen
from .diffpoly import Derivative, DiffPolynomial, IndepVar, SystemSignature
from .elimination import rif
from .errors import EigenFailError, InconsistentError, NotCommutingError, NotLinearError
from .ode import reduce_to_parametric_ode
from .parser import SystemSource

log = logging.getLogger(__name__)


def poly_to_diff(polys, names):
    """Map each monomial x^a to the derivative D^a u (constants to c*u)."""
    sig = SystemSignature(tuple(names), ("u",))
    n = len(names)
    eqs = []
    for p in polys:
        out = {}
        for m, c in p.terms.items():
            idx = [0] * n
            for v, e in m:
                if not isinstance(v, IndepVar):
                    raise ValueError("polynomial systems contain only variables")
                idx[v.index] += e
            out[((Derivative(0, tuple(idx)), 1),)] = c
        eqs.append(DiffPolynomial(out))
    return SystemSource(sig, eqs)


@dataclass
class MultiplicationSystem:
    """Exact matrices X_i whose column k holds D_i(basis_k) in the basis.

    Equivalently the state vector v of basis derivatives obeys
    dv/dx_i = X_i^T v.
    """
    basis: list
    matrices: list
    names: tuple = ()

    @property
    def dimension(self):
        return len(self.basis)

    def sparsity(self):
        m = self.dimension
        return [sum(1 for row in X for c in row if c) / float(m * m or 1) for X in self.matrices]


def _matmul(a, b):
    cols = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col) if x and y), Fraction(0)) for col in cols]
            for row in a]


def build_multiplication_matrices(p):
    if p.constraints:
        raise NotLinearError("the ODE system carries constraints")
    basis = p.state_vars
    pos = {d: k for k, d in enumerate(basis)}
    m = len(basis)
    matrices = []
    for i, rhs in enumerate(p.odes):
        X = [[Fraction(0)] * m for _ in range(m)]
        for k, expr in enumerate(rhs):
            if not expr.den.is_constant():
                raise NotLinearError("right-hand side %d has a nonconstant denominator" % k)
            scale = 1 / expr.den.constant_value()
            for mono, c in expr.num.terms.items():
                if len(mono) != 1 or mono[0][1] != 1 or mono[0][0] not in pos:
                    raise NotLinearError("right-hand side %d is not linear homogeneous" % k)
                X[pos[mono[0][0]]][k] += c * scale
        matrices.append(X)
    for i in range(len(matrices)):
        for j in range(i + 1, len(matrices)):
            if _matmul(matrices[i], matrices[j]) != _matmul(matrices[j], matrices[i]):
                raise NotCommutingError("X_%d and X_%d do not commute" % (i + 1, j + 1))
    return MultiplicationSystem(basis, matrices, tuple(p.signature.indep_names))


def quotient_system(names, polys, prolongation_cap=4):
    """rif + ODE reduction + multiplication matrices for a polynomial system.

    Returns (RifForm, ParametricOdeSystem, MultiplicationSystem).  The unit
    ideal has no roots and is reported as E_INCONSISTENT even though u = 0
    is a perfectly good solution of the associated PDE system.
    """
    f = rif(poly_to_diff(polys, names), prolongation_cap=prolongation_cap)
    p = reduce_to_parametric_ode(f)
    if not p.states:
        raise InconsistentError("the polynomials generate the unit ideal")
    return f, p, build_multiplication_matrices(p)


@dataclass
class RootSet:
    roots: list
    residuals: list
    multiplicities: list
    eigenvectors: list = field(default_factory=list)

    def __len__(self):
        return len(self.roots)


def _poly_value(p, point):
    total = 0j
    for mono, c in p.terms.items():
        t = complex(c)
        for v, e in mono:
            t *= point[v.index] ** e
        total += t
    return total


def residual(polys, point):
    return max((abs(_poly_value(p, point)) for p in polys), default=0.0)


def solve_zero_dim(ms, polys, tol=1e-8, seed=0):
    """Roots of a zero-dimensional system from its commuting multiplication matrices."""
    rng = np.random.default_rng(seed)
    try:
        return _solve(ms, polys, tol, rng)
    except EigenFailError:
        log.warning("eigenvalue iteration failed; retrying with a new combination")
        return _solve(ms, polys, tol, rng)


def _solve(ms, polys, tol, rng):
    m = ms.dimension
    if m == 0:
        return RootSet([], [], [])
    # Transposes act on the vector of basis values at a root.
    Xt = [np.array([[float(c) for c in row] for row in X]).T for X in ms.matrices]
    coeffs = rng.uniform(0.5, 1.5, len(Xt)) * rng.choice([-1.0, 1.0], len(Xt))
    M, d = eigen.balance(sum(c * X for c, X in zip(coeffs, Xt)))
    Xt = [X * d[None, :] / d[:, None] for X in Xt]
    T, Q = eigen.schur(M, max_iter=100 * m)
    lam = np.diag(T).copy()
    labels = eigen.cluster(lam, scale=max(1.0, np.abs(lam).max()))
    T, Q, blocks = eigen.group_clusters(T, Q, labels)
    roots, mults, vecs = [], [], []
    for start, stop in blocks:
        k = stop - start
        if k == 1:
            w = eigen.inverse_iteration(M, T[start, start])
            coords = [complex(np.vdot(w, X @ w) / np.vdot(w, w)) for X in Xt]
            vecs.append(w)
        else:
            Qb = Q[:, start:stop]
            coords = [complex(np.trace(Qb.conj().T @ X @ Qb) / k) for X in Xt]
            vecs.append(Qb[:, 0])
        roots.append(coords)
        mults.append(k)
    roots, mults, vecs = _merge(roots, mults, vecs, 10 * tol)
    roots = [[_clean(c) for c in r] for r in roots]
    res = [residual(polys, r) for r in roots]
    order = sorted(range(len(roots)), key=lambda j: (-mults[j], [(round(c.real, 9), round(c.imag, 9)) for c in roots[j]]))
    return RootSet([roots[j] for j in order], [res[j] for j in order],
                   [mults[j] for j in order], [vecs[j] for j in order])


def _clean(c, eps=1e-12):
    re = 0.0 if abs(c.real) < eps else c.real
    im = 0.0 if abs(c.imag) < eps else c.imag
    return complex(re, im)


def _merge(roots, mults, vecs, tol):
    out_r, out_m, out_v = [], [], []
    for r, k, v in zip(roots, mults, vecs):
        for j, s in enumerate(out_r):
            if max(abs(a - b) for a, b in zip(r, s)) <= tol:
                total = out_m[j] + k
                out_r[j] = [(a * out_m[j] + b * k) / total for a, b in zip(s, r)]
                out_m[j] = total
                break
        else:
            out_r.append(r)
            out_m.append(k)
            out_v.append(v)
    return out_r, out_m, out_v
