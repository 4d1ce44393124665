"""Exact linear algebra over F_2 (int bitsets), F_p (numpy residues) and Z (Smith form)."""

from __future__ import annotations

from math import gcd
from typing import Iterable, Sequence

import numpy as np


def gf2_rank(rows: Iterable[int]) -> int:
    """Rank over F_2 of rows encoded as int bitsets."""
    # pivots keyed by lowest set bit position; hashing the bit itself is slow for wide rows
    pivots: dict[int, int] = {}
    for row in rows:
        while row:
            low = (row & -row).bit_length()
            p = pivots.get(low)
            if p is None:
                pivots[low] = row
                break
            row ^= p
    return len(pivots)


class GF2Basis:
    """Incremental echelon basis of a subspace of F_2^n, rows as int bitsets."""

    def __init__(self) -> None:
        self.pivots: dict[int, int] = {}

    def reduce(self, row: int) -> int:
        while row:
            p = self.pivots.get((row & -row).bit_length())
            if p is None:
                return row
            row ^= p
        return 0

    def add(self, row: int) -> bool:
        r = self.reduce(row)
        if r:
            self.pivots[(r & -r).bit_length()] = r
            return True
        return False

    def __contains__(self, row: int) -> bool:
        return self.reduce(row) == 0

    def __len__(self) -> int:
        return len(self.pivots)


def rref_mod(A: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over F_p; returns (R, pivot columns)."""
    R = np.array(A, dtype=np.int64) % p
    if R.ndim != 2:
        raise ValueError("expected a 2-d array")
    m, n = R.shape
    pivots: list[int] = []
    r = 0
    for col in range(n):
        if r == m:
            break
        nz = np.nonzero(R[r:, col])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        inv = pow(int(R[r, col]), -1, p)
        R[r] = (R[r] * inv) % p
        others = np.nonzero(R[:, col])[0]
        others = others[others != r]
        if others.size:
            R[others] = (R[others] - np.outer(R[others, col], R[r])) % p
        pivots.append(col)
        r += 1
    return R[:r], pivots


def rank_mod(A: np.ndarray, p: int) -> int:
    if A.size == 0:
        return 0
    return len(rref_mod(A, p)[1])


def nullspace_mod(A: np.ndarray, p: int, ncols: int | None = None) -> np.ndarray:
    """Basis (as rows) of {x : A x = 0} over F_p."""
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[1] if A.ndim == 2 else int(ncols or 0)
    if A.size == 0:
        return np.eye(n, dtype=np.int64)
    R, piv = rref_mod(A, p)
    free = [c for c in range(n) if c not in set(piv)]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for b, fc in enumerate(free):
        basis[b, fc] = 1
        for row, pc in enumerate(piv):
            basis[b, pc] = (-R[row, fc]) % p
    return basis


def smith_diagonal(M: Sequence[Sequence[int]] | np.ndarray) -> list[int]:
    """Nonzero diagonal of an integer diagonalisation of M (absolute values).

    Not necessarily in divisibility order; feed through invariant_factors.
    Arithmetic is on Python ints, so there is no overflow.
    """
    A = np.array(M, dtype=object)
    if A.ndim != 2 or A.size == 0:
        return []
    m, n = A.shape
    diag: list[int] = []
    t = 0
    while t < min(m, n):
        sub = A[t:, t:]
        nz = np.argwhere(sub != 0)
        if nz.size == 0:
            break
        absvals = np.abs(sub[nz[:, 0], nz[:, 1]]).astype(object)
        i, j = nz[int(np.argmin(absvals))]
        _swap(A, t, t + i, t + j)
        while True:
            piv = A[t, t]
            col = A[t + 1:, t]
            if col.size and np.any(col != 0):
                q = col // piv
                A[t + 1:, t:] -= np.outer(q, A[t, t:])
            row = A[t, t + 1:]
            if row.size and np.any(row != 0):
                q = row // piv
                A[t:, t + 1:] -= np.outer(A[t:, t], q)
            rest_c = np.nonzero(A[t + 1:, t])[0]
            rest_r = np.nonzero(A[t, t + 1:])[0]
            if rest_c.size == 0 and rest_r.size == 0:
                break
            cands = [(abs(A[t + 1 + k, t]), t + 1 + k, t) for k in rest_c]
            cands += [(abs(A[t, t + 1 + k]), t, t + 1 + k) for k in rest_r]
            _, ri, ci = min(cands)
            _swap(A, t, ri, ci)
        diag.append(abs(int(A[t, t])))
        t += 1
    return diag


def _swap(A: np.ndarray, t: int, i: int, j: int) -> None:
    if i != t:
        A[[t, i]] = A[[i, t]]
    if j != t:
        A[:, [t, j]] = A[:, [j, t]]


def invariant_factors(orders: Iterable[int]) -> list[int]:
    """Invariant factors (each dividing the next) of a direct sum of cyclic groups."""
    a = sorted(int(x) for x in orders if abs(int(x)) != 1)
    if any(x == 0 for x in a):
        raise ValueError("cyclic orders must be nonzero")
    a = [abs(x) for x in a]
    changed = True
    while changed:
        changed = False
        for i in range(len(a)):
            for j in range(i + 1, len(a)):
                g = gcd(a[i], a[j])
                lcm = a[i] * a[j] // g
                if (a[i], a[j]) != (g, lcm):
                    a[i], a[j] = g, lcm
                    changed = True
    return [x for x in a if x != 1]
