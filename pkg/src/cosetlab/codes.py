"""Linear codes over prime fields: generators, duals, cosets, Reed-Solomon.

A code is stored by a full-rank k x n generator G and a full-rank
(n-k) x n parity-check H with G H^T = 0. Messages enumerate in
lexicographic (mixed-radix index) order; codeword i is message i times G.
"""

from __future__ import annotations

from functools import cached_property

import numpy as np

from .config import require_budget
from .galois import PrimeField, all_vectors

__all__ = [
    "LinearCode",
    "rs_code",
    "random_code",
    "dual",
    "syndrome",
    "coset_sample",
    "rref",
    "null_space",
    "solve_particular",
]


# ---- dense Gaussian elimination over F_q ---------------------------------


def rref(field: PrimeField, m: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over F_q; returns (rref matrix, pivot columns)."""
    a = np.array(m, dtype=np.int64) % field.q
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
        a[r] = (a[r] * field.inv(int(a[r, c]))) % field.q
        for i in range(rows):
            if i != r and a[i, c]:
                a[i] = (a[i] - a[i, c] * a[r]) % field.q
        pivots.append(c)
        r += 1
    return a, pivots


def null_space(field: PrimeField, m: np.ndarray) -> np.ndarray:
    """Basis of {x : m x^T = 0} as rows; shape (dim, cols)."""
    a, pivots = rref(field, m)
    cols = a.shape[1]
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for i, fc in enumerate(free):
        basis[i, fc] = 1
        for r, pc in enumerate(pivots):
            basis[i, pc] = (-a[r, fc]) % field.q
    return basis


def solve_particular(field: PrimeField, m: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """One solution x of m x^T = b^T, or None if inconsistent."""
    m = np.asarray(m, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64) % field.q
    aug = np.hstack([m % field.q, b.reshape(-1, 1)])
    a, pivots = rref(field, aug)
    cols = m.shape[1]
    if cols in pivots:
        return None
    x = np.zeros(cols, dtype=np.int64)
    for r, pc in enumerate(pivots):
        x[pc] = a[r, cols]
    return x


# ---- code objects ----------------------------------------------------------


class LinearCode:
    """[n, k] linear code over F_q given by generator G (H derived or given)."""

    def __init__(self, q: int, g: np.ndarray, h: np.ndarray | None = None):
        self.field = PrimeField(q)
        self.q = self.field.q
        g = np.array(g, dtype=np.int64) % q
        if g.ndim != 2:
            raise ValueError("generator must be a matrix")
        self.k, self.n = g.shape
        if not 1 <= self.k < self.n:
            raise ValueError(f"need 1 <= k < n, got k={self.k}, n={self.n}")
        _, pivots = rref(self.field, g)
        if len(pivots) != self.k:
            raise ValueError("generator matrix is not full rank")
        self.G = g
        if h is None:
            h = null_space(self.field, g)
        else:
            h = np.array(h, dtype=np.int64) % q
        _, hpiv = rref(self.field, h)
        if h.shape != (self.n - self.k, self.n) or len(hpiv) != self.n - self.k:
            raise ValueError("parity-check matrix has wrong shape or rank")
        if np.any((self.G @ h.T) % q):
            raise ValueError("G H^T != 0")
        self.H = h

    def __repr__(self) -> str:
        return f"LinearCode(q={self.q}, n={self.n}, k={self.k})"

    def messages(self, budget: int | None = None) -> np.ndarray:
        """All q^k messages in index order, shape (q^k, k)."""
        return all_vectors(self.q, self.k, budget)

    def codewords(self, budget: int | None = None) -> np.ndarray:
        """All q^k codewords in message-index order, shape (q^k, n)."""
        require_budget(self.q**self.k * self.n, budget)
        return (self.messages(budget) @ self.G) % self.q

    def encode(self, message: np.ndarray) -> np.ndarray:
        message = np.asarray(message, dtype=np.int64)
        if message.shape[-1] != self.k:
            raise ValueError(f"message length must be {self.k}")
        return (message @ self.G) % self.q

    def contains(self, y: np.ndarray) -> bool:
        return not np.any(syndrome(self, y, "primal"))

    @cached_property
    def dual(self) -> "LinearCode":
        """Code with G and H roles swapped."""
        return LinearCode(self.q, self.H, self.G)


def dual(code: LinearCode) -> LinearCode:
    """The dual code; any generating matrix of C parity-checks its dual."""
    return code.dual


def rs_code(q: int, k: int) -> LinearCode:
    """Full-support Reed-Solomon code: degree-<k evaluations at all of F_q.

    Evaluation points are the residues 0..q-1 in ascending order, so
    coordinate i of a codeword is P(i). Row i of G is the i-th power row
    (0^i, 1^i, ..., (q-1)^i); messages are coefficient vectors,
    low-degree-first. H is computed as the null space of G (its row space
    equals the degree-<(q-k) evaluation code).
    """
    field = PrimeField(q)
    if not 1 <= k < q:
        raise ValueError(f"need 1 <= k < q, got k={k}, q={q}")
    points = np.arange(q, dtype=np.int64)
    g = np.ones((k, q), dtype=np.int64)
    for i in range(1, k):
        g[i] = (g[i - 1] * points) % q
    return LinearCode(field.q, g)


def random_code(q: int, n: int, k: int, seed: int) -> LinearCode:
    """Reproducible random [n, k] code with full-rank G (systematic left part)."""
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    # identity block guarantees rank k; the rest is uniform
    g = np.hstack([
        np.eye(k, dtype=np.int64),
        rng.integers(0, q, size=(k, n - k), dtype=np.int64),
    ])
    return LinearCode(q, g)


def syndrome(code: LinearCode, y: np.ndarray, side: str = "primal") -> np.ndarray:
    """H y^T (primal) or G y^T (dual)."""
    y = np.asarray(y, dtype=np.int64)
    if y.shape[-1] != code.n:
        raise ValueError(f"vector length must be {code.n}")
    if side == "primal":
        return (y @ code.H.T) % code.q
    if side == "dual":
        return (y @ code.G.T) % code.q
    raise ValueError(f"side must be 'primal' or 'dual', got {side!r}")


def coset_sample(code: LinearCode, u: np.ndarray, side: str,
                 rng: np.random.Generator) -> np.ndarray:
    """Uniform element of the coset {y : syndrome(y, side) = u}.

    One particular solution by Gaussian elimination plus a uniform random
    element of the kernel code (the code itself for 'primal', its dual for
    'dual').
    """
    u = np.asarray(u, dtype=np.int64) % code.q
    if side == "primal":
        m, kernel_gen = code.H, code.G
    elif side == "dual":
        m, kernel_gen = code.G, code.H
    else:
        raise ValueError(f"side must be 'primal' or 'dual', got {side!r}")
    if u.shape != (m.shape[0],):
        raise ValueError(f"syndrome length must be {m.shape[0]}")
    particular = solve_particular(code.field, m, u)
    assert particular is not None, "full-rank system cannot be inconsistent"
    coeffs = rng.integers(0, code.q, size=kernel_gen.shape[0], dtype=np.int64)
    return (particular + coeffs @ kernel_gen) % code.q


def coset_members(code: LinearCode, u: np.ndarray, side: str,
                  budget: int | None = None) -> np.ndarray:
    """All coset elements, exhaustively (desk scale only)."""
    u = np.asarray(u, dtype=np.int64) % code.q
    if side == "primal":
        m, kernel_gen = code.H, code.G
    elif side == "dual":
        m, kernel_gen = code.G, code.H
    else:
        raise ValueError(f"side must be 'primal' or 'dual', got {side!r}")
    particular = solve_particular(code.field, m, u)
    assert particular is not None
    require_budget(code.q ** kernel_gen.shape[0] * code.n, budget)
    span = (all_vectors(code.q, kernel_gen.shape[0]) @ kernel_gen) % code.q
    return (particular + span) % code.q
