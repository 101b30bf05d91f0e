import itertools

import numpy as np
import pytest

from pde2ode import parse_polynomial_system
from pde2ode import eigen
from pde2ode.errors import InconsistentError, NotLinearError
from pde2ode.zero_dim import (build_multiplication_matrices, poly_to_diff, quotient_system,
                              residual, solve_zero_dim)

from conftest import SYSTEMS, poly


def system(text):
    names, polys = parse_polynomial_system(text)
    f, p, ms = quotient_system(names, polys)
    return polys, ms


def test_poly_to_diff_ms27():
    names, polys = parse_polynomial_system((SYSTEMS / "ms27.pde").read_text())
    src = poly_to_diff(polys, names)
    sig = src.signature
    assert src.equations == [poly(t, sig) for t in (
        "diff(u,x,x,x) - diff(u,y,z)", "diff(u,y,y,y) - diff(u,x,z)", "diff(u,z,z,z) - diff(u,x,y)")]


def test_poly_to_diff_small():
    names, polys = parse_polynomial_system("vars x; eq x - 1;")
    src = poly_to_diff(polys, names)
    assert src.equations == [poly("diff(u,x) - u", src.signature)]
    names, polys = parse_polynomial_system("vars x; eq 1;")
    src = poly_to_diff(polys, names)
    assert src.equations == [poly("u", src.signature)]
    with pytest.raises(InconsistentError):
        quotient_system(names, polys)


def test_nilpotent_shift():
    polys, ms = system("vars x; eq x^2;")
    assert [ms.basis[0].idx, ms.basis[1].idx] == [(0,), (1,)]
    assert ms.matrices == [[[0, 0], [1, 0]]]
    roots = solve_zero_dim(ms, polys)
    assert len(roots) == 1 and roots.multiplicities == [2]
    assert abs(roots.roots[0][0]) < 1e-8 and roots.residuals[0] < 1e-8


def test_one_by_one():
    polys, ms = system("vars x; eq x - 1;")
    assert ms.matrices == [[[1]]]


def test_simple_point():
    polys, ms = system("vars x, y; eq x - 1; eq y - 2;")
    roots = solve_zero_dim(ms, polys)
    assert len(roots) == 1
    assert max(abs(a - b) for a, b in zip(roots.roots[0], (1, 2))) < 1e-12
    assert roots.residuals[0] < 1e-12


def test_circle_and_line():
    polys, ms = system("vars x, y; eq x^2 + y^2 - 5; eq x - 2*y;")
    roots = solve_zero_dim(ms, polys)
    pts = sorted((round(r[0].real, 9), round(r[1].real, 9)) for r in roots.roots)
    assert pts == [(-2.0, -1.0), (2.0, 1.0)]
    assert max(roots.residuals) < 1e-10


def test_ms27():
    polys, ms = system((SYSTEMS / "ms27.pde").read_text())
    assert ms.dimension == 27
    X = ms.matrices
    for A, B in itertools.combinations(X, 2):
        AB = [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]
        BA = [[sum(a * b for a, b in zip(row, col)) for col in zip(*A)] for row in B]
        assert AB == BA
    roots = solve_zero_dim(ms, polys)
    assert len(roots) == 17
    assert roots.multiplicities[0] == 11 and max(abs(c) for c in roots.roots[0]) < 1e-8
    assert sum(roots.multiplicities) == 27
    assert max(roots.residuals) < 1e-8


def test_seed_independence():
    polys, ms = system((SYSTEMS / "ms27.pde").read_text())
    a, b = solve_zero_dim(ms, polys, seed=0), solve_zero_dim(ms, polys, seed=7)
    assert a.multiplicities == b.multiplicities
    for r, s in zip(a.roots, b.roots):
        assert max(abs(x - y) for x, y in zip(r, s)) < 1e-8


def test_not_linear(ex1_ode):
    with pytest.raises(NotLinearError):
        build_multiplication_matrices(ex1_ode)


def test_residual():
    names, polys = parse_polynomial_system("vars x, y; eq x*y - 1;")
    assert residual(polys, [2, 0.5]) == 0
    assert residual(polys, [1j, 1j]) == 2


# -- eigensolver ------------------------------------------------------------

def same_spectrum(a, b, tol=1e-9):
    b = list(b)
    for z in a:
        k = int(np.argmin([abs(z - w) for w in b]))
        if abs(z - b.pop(k)) > tol:
            return False
    return not b


def test_schur_reconstructs():
    rng = np.random.default_rng(3)
    for n in (1, 2, 5, 30):
        A = rng.standard_normal((n, n))
        T, Q = eigen.schur(A)
        assert np.allclose(np.tril(T, -1), 0)
        assert np.allclose(Q.conj().T @ Q, np.eye(n))
        assert np.linalg.norm(Q @ T @ Q.conj().T - A) < 1e-10 * max(1, np.linalg.norm(A))


def test_eigvals_match_reference():
    rng = np.random.default_rng(4)
    A = rng.standard_normal((12, 12))
    assert same_spectrum(eigen.eigvals(A), np.linalg.eigvals(A))


def test_balance_is_similarity():
    A = np.array([[1, 1e6, 0], [1e-6, 2, 1e4], [0, 1e-4, 3]])
    B, d = eigen.balance(A)
    assert np.allclose(B, A * d[None, :] / d[:, None])
    assert same_spectrum(eigen.eigvals(A), np.linalg.eigvals(A))


def test_cluster_and_reorder():
    labels = eigen.cluster(np.array([1.0, 5.0, 1.0 + 1e-6, 5.0 - 1e-7, 3.0]))
    assert labels[0] == labels[2] and labels[1] == labels[3] and len(set(labels)) == 3
    rng = np.random.default_rng(5)
    A = np.diag([1.0, 5.0, 1.0, 5.0, 3.0]) + np.triu(rng.standard_normal((5, 5)), 1)
    T, Q = eigen.schur(A)
    lab = eigen.cluster(np.diag(T))
    T2, Q2, blocks = eigen.group_clusters(T, Q, lab)
    assert np.linalg.norm(Q2 @ T2 @ Q2.conj().T - A) < 1e-10
    sizes = sorted(b - a for a, b in blocks)
    assert sizes == [1, 2, 2]
    for a, b in blocks:
        vals = np.diag(T2)[a:b]
        assert np.ptp(vals.real) < 1e-6


def test_inverse_iteration():
    A = np.array([[2.0, 1.0], [0.0, 3.0]])
    w = eigen.inverse_iteration(A, 3.0)
    assert np.allclose(A @ w, 3.0 * w, atol=1e-8)
