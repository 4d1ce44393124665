"""Cochains, coboundary maps and cohomology over F_p, Z and Z_m."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from math import gcd
from typing import Mapping, Sequence

import numpy as np

from .complex import Complex, Simplex, connected_components, shells_containing, simplex
from .errors import InvalidInput, SearchSpaceTooLarge
from .linalg import (gf2_rank, invariant_factors, nullspace_mod, rank_mod, rref_mod,
                     smith_diagonal)
from .rings import F2, Ring

COSET_LIMIT = 2 ** 24


def perm_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation sorting seq."""
    inv = sum(1 for a, b in combinations(seq, 2) if a > b)
    return -1 if inv % 2 else 1


@dataclass(frozen=True)
class Cochain:
    """Sparse j-cochain; values are stored on ascending orderings only."""

    degree: int
    ring: Ring
    values: Mapping[Simplex, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean = {}
        for s, v in self.values.items():
            key = simplex(s)
            if len(key) != self.degree + 1:
                raise InvalidInput(f"{key} is not a {self.degree}-simplex")
            clean[key] = self.ring.normalize(clean.get(key, 0) + v * perm_sign(s))
        object.__setattr__(self, "values", {s: v for s, v in clean.items() if v})

    def value(self, ordered: Sequence[int]) -> int:
        """Value on an ordered simplex, applying the alternating sign."""
        v = self.values.get(simplex(ordered), 0)
        return self.ring.normalize(perm_sign(ordered) * v)

    def support(self) -> list[Simplex]:
        return sorted(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def __add__(self, other: "Cochain") -> "Cochain":
        if other.degree != self.degree or other.ring != self.ring:
            raise InvalidInput("cochains of different degree or ring")
        out = dict(self.values)
        for s, v in other.values.items():
            out[s] = out.get(s, 0) + v
        return Cochain(self.degree, self.ring, out)

    def scale(self, r: int) -> "Cochain":
        return Cochain(self.degree, self.ring, {s: r * v for s, v in self.values.items()})

    def to_vector(self, c: Complex) -> np.ndarray:
        idx = c.index(self.degree)
        vec = np.zeros(len(idx), dtype=np.int64 if self.ring.modulus else object)
        for s, v in self.values.items():
            if s not in idx:
                raise InvalidInput(f"{s} is not a simplex of the complex")
            vec[idx[s]] = v
        return vec

    @classmethod
    def from_vector(cls, c: Complex, j: int, ring: Ring, vec: Sequence[int]) -> "Cochain":
        return cls(j, ring, {s: int(v) for s, v in zip(c.simplices(j), vec) if int(v)})

    @classmethod
    def zero(cls, j: int, ring: Ring) -> "Cochain":
        return cls(j, ring, {})


@dataclass(frozen=True)
class CohomologySummary:
    j: int
    free_rank: int
    torsion: tuple[int, ...] = ()

    @property
    def vanishes(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def to_dict(self) -> dict:
        return {"j": self.j, "free_rank": self.free_rank, "torsion": list(self.torsion)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def coboundary_matrix(c: Complex, j: int, ring: Ring | None = None) -> np.ndarray:
    """Matrix of the j-th coboundary: rows (j+1)-simplices, columns j-simplices."""
    rows = c.simplices(j + 1) if j + 1 <= c.d else []
    cols = c.index(j) if 0 <= j <= c.d else {}
    M = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for r, s in enumerate(rows):
        for i in range(len(s)):
            M[r, cols[s[:i] + s[i + 1:]]] = -1 if i % 2 else 1
    if ring is not None and ring.modulus is not None:
        M %= ring.modulus
    return M


def coboundary_rows_f2(c: Complex, j: int) -> list[int]:
    """Rows of the j-th coboundary over F_2 as int bitsets over column positions."""
    if j < 0 or j + 1 > c.d:
        return []
    cols = c.index(j)
    out = []
    for s in c.simplices(j + 1):
        row = 0
        for i in range(len(s)):
            row |= 1 << cols[s[:i] + s[i + 1:]]
        out.append(row)
    return out


def coboundary_rank(c: Complex, j: int, ring: Ring) -> int:
    if j < 0 or j + 1 > c.d or not c.count(j + 1):
        return 0
    if ring == F2:
        return gf2_rank(coboundary_rows_f2(c, j))
    if ring.is_field:
        return rank_mod(coboundary_matrix(c, j), ring.modulus)
    return len(smith_diagonal(coboundary_matrix(c, j)))


def apply_coboundary(c: Complex, f: Cochain) -> Cochain:
    j = f.degree
    out: dict[Simplex, int] = {}
    if j + 1 > c.d:
        return Cochain(j + 1, f.ring, {})
    for s, v in f.values.items():
        if s not in c:
            raise InvalidInput(f"{s} is not a simplex of the complex")
        for a in c.link(s):
            t = tuple(sorted(s + (a,)))
            i = t.index(a)
            out[t] = out.get(t, 0) + (-v if i % 2 else v)
    return Cochain(j + 1, f.ring, out)


def _snf_parts(c: Complex, j: int) -> list[int]:
    if j < 0 or j + 1 > c.d or not c.count(j + 1) or not c.count(j):
        return []
    return smith_diagonal(coboundary_matrix(c, j))


def cohomology(c: Complex, j: int, ring: Ring) -> CohomologySummary:
    """H^j(c; ring) as a free rank plus invariant factors of the torsion part."""
    if not 0 <= j <= c.d:
        raise InvalidInput(f"degree {j} outside [0, {c.d}]")
    cj = c.count(j)
    if ring.is_field:
        free = cj - coboundary_rank(c, j, ring) - coboundary_rank(c, j - 1, ring)
        return CohomologySummary(j, free)
    below = _snf_parts(c, j - 1)
    here = _snf_parts(c, j)
    free = cj - len(here) - len(below)
    tors = invariant_factors(below)
    if ring.kind == "z":
        return CohomologySummary(j, free, tuple(tors))
    m = ring.modulus
    # universal coefficients: H^j(Z) (x) Z_m  +  Tor(H^{j+1}(Z), Z_m)
    orders = [m] * free + [gcd(t, m) for t in tors]
    orders += [gcd(t, m) for t in invariant_factors(here)]
    inv = invariant_factors(orders)
    return CohomologySummary(j, sum(1 for x in inv if x == m), tuple(x for x in inv if x != m))


def is_cohom_connected(c: Complex, j: int, ring: Ring) -> bool:
    """One component and H^i = 0 for 1 <= i <= j."""
    if len(connected_components(c)) != 1:
        return False
    return all(cohomology(c, i, ring).vanishes for i in range(1, j + 1))


def shell_certificate(c: Complex, f: Cochain) -> tuple[int, ...] | None:
    """Smallest j-shell meeting supp(f) in exactly one j-simplex, if any."""
    supp = set(f.values)
    j = f.degree
    found = []
    for s in supp:
        for a in shells_containing(c, s):
            A = tuple(sorted(s + (a,)))
            if sum(1 for t in combinations(A, j + 1) if t in supp) == 1:
                found.append(A)
    return min(found) if found else None


def _image_basis(c: Complex, j: int, p: int) -> np.ndarray:
    """Row basis of im(coboundary into degree j) over F_p."""
    if j < 1:
        return np.zeros((0, c.count(j)), dtype=np.int64)
    M = coboundary_matrix(c, j - 1)
    if M.size == 0:
        return np.zeros((0, c.count(j)), dtype=np.int64)
    R, _ = rref_mod(M.T, p)
    return R


def _combos(p: int, r: int, start: int, stop: int) -> np.ndarray:
    """Rows start..stop-1 of the lexicographic enumeration of F_p^r."""
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.zeros((idx.size, r), dtype=np.int64)
    for col in range(r - 1, -1, -1):
        out[:, col] = idx % p
        idx //= p
    return out


def _enumerate_span(basis: np.ndarray, p: int, offset: np.ndarray, chunk: int = 1 << 15):
    """Yield chunks of offset + span(basis) over F_p, in lexicographic coefficient order."""
    r = basis.shape[0]
    total = p ** r
    for start in range(0, total, chunk):
        co = _combos(p, r, start, min(total, start + chunk))
        yield (offset + co @ basis) % p


def min_support_in_class(c: Complex, f: Cochain, limit: int = COSET_LIMIT) -> Cochain:
    """A minimum-support representative of f + im(coboundary), by exhaustive search."""
    if not f.ring.is_field:
        raise InvalidInput("min_support_in_class needs a prime field")
    p, j = f.ring.modulus, f.degree
    basis = _image_basis(c, j, p)
    if p ** basis.shape[0] > limit:
        raise SearchSpaceTooLarge(f"{p}^{basis.shape[0]} cosets exceed {limit}")
    vec = f.to_vector(c) % p
    best, best_size = vec, int(np.count_nonzero(vec))
    for block in _enumerate_span(basis, p, vec):
        sizes = np.count_nonzero(block, axis=1)
        k = int(np.argmin(sizes))
        if sizes[k] < best_size:
            best, best_size = block[k], int(sizes[k])
    return Cochain.from_vector(c, j, f.ring, best)


def cocycle_space(c: Complex, j: int, p: int) -> np.ndarray:
    """Row basis of the F_p cocycles of degree j."""
    M = coboundary_matrix(c, j) if j + 1 <= c.d else np.zeros((0, c.count(j)), dtype=np.int64)
    if M.shape[0] == 0:
        return np.eye(c.count(j), dtype=np.int64)
    return nullspace_mod(M, p)


def iter_cocycles(c: Complex, j: int, p: int, limit: int = 1 << 16):
    """Yield blocks (as rows) of all F_p j-cocycles, zero first."""
    basis = cocycle_space(c, j, p)
    if p ** basis.shape[0] > limit:
        raise SearchSpaceTooLarge(f"{p}^{basis.shape[0]} cocycles exceed {limit}")
    yield from _enumerate_span(basis, p, np.zeros(c.count(j), dtype=np.int64))


def meshulam_wallach_check(n: int, j: int, f: Cochain) -> bool:
    """|supp(coboundary f)| >= n |supp f| / (j+2) on the full simplex on [n]."""
    full = Complex.full(n, j + 1)
    D = apply_coboundary(full, f)
    return len(D) * (j + 2) >= n * len(f)


def h1_dimension_f2_sparse(c: Complex) -> int:
    """dim H^1(c; F_2) for large sparse complexes.

    Gauge-fixes a cocycle to zero on a spanning forest, propagates the forced
    zeros through triangles, then solves what remains exactly.
    """
    edges = c.simplices(1)
    eidx = c.index(1)
    known = bytearray(len(edges))
    parent = list(range(c.n + 1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for k, (u, v) in enumerate(edges):
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            known[k] = 1
    tris = [(eidx[(a, b)], eidx[(a, cc)], eidx[(b, cc)]) for a, b, cc in c.simplices(2)] \
        if c.d >= 2 else []
    by_edge: list[list[int]] = [[] for _ in edges]
    for t, tri in enumerate(tris):
        for e in tri:
            by_edge[e].append(t)
    stack = [k for k in range(len(edges)) if known[k]]
    while stack:
        e = stack.pop()
        for t in by_edge[e]:
            unknown = [x for x in tris[t] if not known[x]]
            if len(unknown) == 1:
                known[unknown[0]] = 1
                stack.append(unknown[0])
    rest = [k for k in range(len(edges)) if not known[k]]
    if not rest:
        return 0
    # peel: an edge in exactly one remaining triangle pivots that row, so both go
    rows = [[e for e in tri if not known[e]] for tri in tris]
    rows = [r for r in rows if r]
    alive = [True] * len(rows)
    touching: dict[int, list[int]] = {e: [] for e in rest}
    for i, r in enumerate(rows):
        for e in r:
            touching[e].append(i)
    degree = {e: len(ts) for e, ts in touching.items()}
    queue = [e for e, dg in degree.items() if dg == 1]
    peeled = 0
    while queue:
        e = queue.pop()
        if degree[e] != 1:
            continue
        i = next(t for t in touching[e] if alive[t])
        alive[i] = False
        peeled += 1
        for x in rows[i]:
            degree[x] -= 1
            if degree[x] == 1:
                queue.append(x)
    core = [e for e in rest if degree[e] > 0]
    pos = {e: i for i, e in enumerate(core)}
    bits = []
    for i, r in enumerate(rows):
        if alive[i]:
            row = 0
            for e in r:
                if e in pos:
                    row |= 1 << pos[e]
            if row:
                bits.append(row)
    return len(rest) - peeled - gf2_rank(bits)
