"""Dense nonsymmetric eigensolver: balancing, Hessenberg reduction, shifted QR.

Sized for matrices of a few hundred rows.  Everything works in complex
arithmetic so that a single-shift iteration suffices.
"""
from __future__ import annotations

import numpy as np

from .errors import EigenFailError

EPS = np.finfo(float).eps


def balance(A, radix=2.0):
    """Diagonal similarity D with D^-1 A D having comparable row/column norms."""
    A = np.array(A, dtype=complex)
    n = A.shape[0]
    d = np.ones(n)
    converged = False
    while not converged:
        converged = True
        for i in range(n):
            c = np.sum(np.abs(A[:, i])) - abs(A[i, i])
            r = np.sum(np.abs(A[i, :])) - abs(A[i, i])
            if c == 0.0 or r == 0.0:
                continue
            g, f, s = r / radix, 1.0, c + r
            while c < g:
                f *= radix
                c *= radix * radix
            g = r * radix
            while c > g:
                f /= radix
                c /= radix * radix
            if (c + r) / f < 0.95 * s:
                converged = False
                d[i] *= f
                A[i, :] /= f
                A[:, i] *= f
    return A, d


def hessenberg(A):
    """Householder reduction: returns (H, Q) with A = Q H Q^H."""
    H = np.array(A, dtype=complex)
    n = H.shape[0]
    Q = np.eye(n, dtype=complex)
    for k in range(n - 2):
        x = H[k + 1:, k]
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            continue
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        v = x.copy()
        v[0] += phase * alpha
        v /= np.linalg.norm(v)
        H[k + 1:, :] -= 2.0 * np.outer(v, v.conj() @ H[k + 1:, :])
        H[:, k + 1:] -= 2.0 * np.outer(H[:, k + 1:] @ v, v.conj())
        Q[:, k + 1:] -= 2.0 * np.outer(Q[:, k + 1:] @ v, v.conj())
        H[k + 2:, k] = 0.0
    return H, Q


def givens(x, y):
    """Unitary G = [[c, s], [-conj(s), c]] with G @ [x, y] = [r, 0]."""
    ax, ay = abs(x), abs(y)
    if ay == 0.0:
        return np.eye(2, dtype=complex)
    if ax == 0.0:
        return np.array([[0.0, np.conj(y) / ay], [-y / ay, 0.0]], dtype=complex)
    r = np.hypot(ax, ay)
    c = ax / r
    s = (x / ax) * np.conj(y) / r
    return np.array([[c, s], [-np.conj(s), c]], dtype=complex)


def _wilkinson(a, b, c, d):
    p = 0.5 * (a - d)
    disc = np.sqrt(p * p + b * c)
    mu1, mu2 = d + p + disc, d + p - disc
    # both are eigenvalues of the trailing 2x2 block; keep the one nearer d
    return mu1 if abs(mu1 - d) < abs(mu2 - d) else mu2


def schur(A, max_iter=None):
    """Complex Schur form A = Q T Q^H by implicitly shifted QR on the Hessenberg form."""
    H, Q = hessenberg(A)
    n = H.shape[0]
    if max_iter is None:
        max_iter = 100 * max(n, 1)
    norm = max(np.abs(H).max(), 1e-300)
    hi = n - 1
    iters = 0
    since = 0
    while hi > 0:
        l = hi
        while l > 0:
            s = abs(H[l - 1, l - 1]) + abs(H[l, l])
            if s == 0.0:
                s = norm
            if abs(H[l, l - 1]) <= EPS * s:
                H[l, l - 1] = 0.0
                break
            l -= 1
        if l == hi:
            hi -= 1
            since = 0
            continue
        iters += 1
        since += 1
        if iters > max_iter:
            raise EigenFailError("QR iteration did not converge in %d steps" % max_iter)
        if since % 11 == 10:
            mu = H[hi, hi] + 0.75 * abs(H[hi, hi - 1]) * np.exp(1j * since)
        else:
            mu = _wilkinson(H[hi - 1, hi - 1], H[hi - 1, hi], H[hi, hi - 1], H[hi, hi])
        x, y = H[l, l] - mu, H[l + 1, l]
        for k in range(l, hi):
            if k > l:
                x, y = H[k, k - 1], H[k + 1, k - 1]
            G = givens(x, y)
            c0 = max(k - 1, l)
            H[k:k + 2, c0:] = G @ H[k:k + 2, c0:]
            r1 = min(k + 3, hi + 1)
            H[:r1, k:k + 2] = H[:r1, k:k + 2] @ G.conj().T
            Q[:, k:k + 2] = Q[:, k:k + 2] @ G.conj().T
            if k > l:
                H[k + 1, k - 1] = 0.0
    return np.triu(H), Q


def cluster(values, scale=1.0, rel=1e-3):
    """Single-linkage clusters of eigenvalues closer than rel*scale; returns labels."""
    n = len(values)
    labels = list(range(n))

    def find(i):
        while labels[i] != i:
            labels[i] = labels[labels[i]]
            i = labels[i]
        return i

    thresh = rel * scale
    for i in range(n):
        for j in range(i + 1, n):
            if abs(values[i] - values[j]) <= thresh:
                labels[find(i)] = find(j)
    roots = [find(i) for i in range(n)]
    names = {}
    return [names.setdefault(r, len(names)) for r in roots]


def swap_adjacent(T, Q, k):
    """Exchange diagonal entries k and k+1 of upper-triangular T, updating Q."""
    t11, t22 = T[k, k], T[k + 1, k + 1]
    G = givens(T[k, k + 1], t22 - t11)
    T[k:k + 2, k:] = G @ T[k:k + 2, k:]
    T[:k + 2, k:k + 2] = T[:k + 2, k:k + 2] @ G.conj().T
    Q[:, k:k + 2] = Q[:, k:k + 2] @ G.conj().T
    T[k + 1, k] = 0.0
    T[k, k], T[k + 1, k + 1] = t22, t11


def group_clusters(T, Q, labels):
    """Reorder the Schur form so that each cluster occupies a contiguous block.

    Returns (T, Q, blocks) with blocks as (start, stop) ranges.
    """
    T, Q = T.copy(), Q.copy()
    labels = list(labels)
    n = len(labels)
    first = {}
    for i, lab in enumerate(labels):
        first.setdefault(lab, i)
    rank = {lab: r for r, lab in enumerate(sorted(first, key=first.get))}
    for i in range(n):
        for k in range(n - 1 - i):
            if rank[labels[k]] > rank[labels[k + 1]]:
                swap_adjacent(T, Q, k)
                labels[k], labels[k + 1] = labels[k + 1], labels[k]
    blocks = []
    start = 0
    for k in range(1, n + 1):
        if k == n or labels[k] != labels[start]:
            blocks.append((start, k))
            start = k
    return T, Q, blocks


def inverse_iteration(A, lam, steps=3, seed=0):
    """Eigenvector of A for the (approximate) eigenvalue lam."""
    n = A.shape[0]
    shift = lam + 10 * EPS * max(1.0, np.abs(A).max()) * (1 + 1j)
    B = A - shift * np.eye(n)
    w = np.random.default_rng(seed).standard_normal(n) + 0j
    for _ in range(steps):
        try:
            w = np.linalg.solve(B, w)
        except np.linalg.LinAlgError:
            B = B + 1e3 * EPS * np.eye(n)
            w = np.linalg.solve(B, w)
        w /= np.linalg.norm(w)
    return w


def eigvals(A):
    """Eigenvalues of a square matrix (balanced)."""
    B, _ = balance(A)
    T, _ = schur(B)
    return np.diag(T)
