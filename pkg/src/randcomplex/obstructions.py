"""Flowers, flower-shaped obstructions and traversability of j-simplex sets."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .cohomology import Cochain, _image_basis, cocycle_space, _enumerate_span
from .complex import Complex, Simplex, shells_containing, simplex
from .errors import InvalidInput, SearchSpaceTooLarge
from .linalg import nullspace_mod
from .rings import F2, Ring


@dataclass(frozen=True)
class Flower:
    K: Simplex
    C: Simplex
    petals: tuple[Simplex, ...]


def flower(K: Sequence[int], C: Sequence[int]) -> Flower:
    """The petals C + {w} for w in K \\ C."""
    K, C = simplex(K), simplex(C)
    if not set(C) < set(K):
        raise InvalidInput(f"centre {C} is not a proper subset of {K}")
    petals = tuple(simplex(C + (w,)) for w in K if w not in C)
    return Flower(K, C, petals)


@dataclass(frozen=True)
class ObstructionCopy:
    """A copy (K, C) of the plain obstruction, or (K, C, w, a) of the shelled one."""

    kind: str
    j: int
    k: int
    K: Simplex
    C: Simplex
    w: int | None = None
    a: int | None = None

    def key(self) -> tuple:
        return (self.K, self.C) if self.kind == "M" else (self.K, self.C, self.w, self.a)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "j": self.j, "k": self.k, "K": list(self.K),
                "C": list(self.C), "w": self.w, "a": self.a}


def is_K_localised(c: Complex, J: Sequence[int], K: Sequence[int]) -> bool:
    """Every simplex of c containing J lies inside K (vacuous if J is not a simplex)."""
    J, Kset = simplex(J), set(K)
    if J not in c:
        return True
    return all(Kset.issuperset(F) for F in c.facets_containing(J))


def _check_jk(c: Complex, j: int, k: int) -> None:
    if not 1 <= j <= k <= c.d:
        raise InvalidInput(f"need 1 <= j <= k <= d, got j={j}, k={k}, d={c.d}")


def find_M_copies(c: Complex, j: int, k: int) -> list[ObstructionCopy]:
    """All pairs (K, C) whose flower petals are each K-localised."""
    _check_jk(c, j, k)
    out = []
    if k == j:
        for K in c.simplices(j):
            if c.facets_containing(K) == [K]:
                out.append(ObstructionCopy("M", j, k, K, K[:j]))
        return out
    need = k - j + 1
    for K in c.simplices(k):
        loc = {J for J in combinations(K, j + 1) if is_K_localised(c, J, K)}
        if len(loc) < need:
            continue
        for C in combinations(K, j):
            if all(tuple(sorted(C + (w,))) in loc for w in K if w not in C):
                out.append(ObstructionCopy("M", j, k, K, C))
    return out


def extend_to_Mhat(c: Complex, m: ObstructionCopy) -> list[ObstructionCopy]:
    out = []
    for w in m.K:
        if w in m.C:
            continue
        base = simplex(m.C + (w,))
        for a in shells_containing(c, base):
            if a not in m.K:
                out.append(ObstructionCopy("Mhat", m.j, m.k, m.K, m.C, w, a))
    return out


def find_Mhat_copies(c: Complex, j: int, k: int) -> list[ObstructionCopy]:
    """Copies (K, C) extended by every w in K \\ C and apex a outside K closing a shell."""
    return [h for m in find_M_copies(c, j, k) for h in extend_to_Mhat(c, m)]


def build_f_M_r(m: ObstructionCopy, r: int, ring: Ring) -> Cochain:
    """Cochain equal to r on each ordered petal [C ascending, w], zero elsewhere."""
    return Cochain(m.j, ring, {m.C + (w,): r for w in m.K if w not in m.C})


def find_local_obstacles(c: Complex, j: int) -> list[tuple[Simplex, list[Simplex]]]:
    """k-simplices K (j <= k <= d) holding at least k-j+1 K-localised j-simplices."""
    out = []
    for k in range(j, c.d + 1):
        for K in c.simplices(k):
            loc = [J for J in combinations(K, j + 1) if is_K_localised(c, J, K)]
            if len(loc) >= k - j + 1:
                out.append((K, loc))
    return out


@dataclass(frozen=True)
class TraversalWitness:
    S: tuple[Simplex, ...]
    T: tuple[Simplex, ...]
    t_vector: tuple[int, ...]
    order: tuple[Simplex, ...]
    j: int
    vertex_count: int

    @property
    def size_bound_ok(self) -> bool:
        return len(self.T) <= len(self.S)

    @property
    def vertex_bound_ok(self) -> bool:
        if not self.S:
            return True
        # t_vector[i] counts simplices of dimension j+1+i, each adding at most i+1 vertices
        extra = sum((i + 1) * t for i, t in enumerate(self.t_vector))
        return self.vertex_count <= self.j + 1 + extra


def _supersets(c: Complex, J: Simplex) -> list[Simplex]:
    """Simplices strictly containing J, in lexicographic order."""
    out = set()
    for F in c.facets_containing(J):
        rest = [v for v in F if v not in J]
        for extra in range(1, len(rest) + 1):
            for add in combinations(rest, extra):
                out.add(tuple(sorted(J + add)))
    return sorted(out)


def _explore(S: list[Simplex], j: int, cover) -> tuple[list[Simplex], list[Simplex]]:
    """Breadth-first exploration from the smallest element; returns (order, T)."""
    Sset = set(S)
    start = min(S)
    found = {start}
    order, T = [start], []
    queue = deque([start])
    while queue:
        J = queue.popleft()
        for sigma in cover(J):
            new = sorted(x for x in combinations(sigma, j + 1) if x in Sset and x not in found)
            if new:
                T.append(sigma)
                for x in new:
                    found.add(x)
                    order.append(x)
                    queue.append(x)
    return order, T


def _joined(S: list[Simplex], j: int, T: Iterable[Simplex]) -> bool:
    parent = {s: s for s in S}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for sigma in T:
        inside = [x for x in combinations(sigma, j + 1) if x in parent]
        for x in inside[1:]:
            ra, rb = find(inside[0]), find(x)
            if ra != rb:
                parent[ra] = rb
    return len({find(s) for s in S}) <= 1


def is_traversable(c: Complex, S: Iterable[Sequence[int]]) -> TraversalWitness | None:
    """Witness that S cannot be split by the higher simplices of c, or None."""
    S = sorted({simplex(s) for s in S})
    if not S:
        return TraversalWitness((), (), (), (), 0, 0)
    j = len(S[0]) - 1
    for s in S:
        if len(s) != j + 1 or s not in c:
            raise InvalidInput(f"{s} is not a {j}-simplex of the complex")
    order, T = _explore(S, j, lambda J: _supersets(c, J))
    if len(order) < len(S):
        return None
    kept = list(T)
    for sigma in T:
        trial = [x for x in kept if x != sigma]
        if _joined(S, j, trial):
            kept = trial
    keep = set(kept)
    order, T = _explore(S, j, lambda J: [s for s in _supersets(c, J) if s in keep])
    t_vector = tuple(sum(1 for s in T if len(s) == k + 1) for k in range(j + 1, c.d + 1))
    verts = {v for s in S for v in s}
    return TraversalWitness(tuple(S), tuple(T), t_vector, tuple(order), j, len(verts))


def all_M_copies(c: Complex, j: int) -> list[ObstructionCopy]:
    return [m for k in range(j, c.d + 1) for m in find_M_copies(c, j, k)]


def minimal_bad_support(c: Complex, j: int, ring: Ring = F2,
                        max_simplices: int = 16) -> Cochain | None:
    """Smallest-support cocycle outside span(coboundaries, copy cochains), or None."""
    if not ring.is_field:
        raise InvalidInput("minimal_bad_support needs a prime field")
    p = ring.modulus
    if c.count(j) > max_simplices:
        raise SearchSpaceTooLarge(f"{c.count(j)} {j}-simplices exceed {max_simplices}")
    n_cols = c.count(j)
    if n_cols == 0:
        return None
    rows = [_image_basis(c, j, p)]
    for m in all_M_copies(c, j):
        rows.append(build_f_M_r(m, 1, ring).to_vector(c).reshape(1, -1) % p)
    W = np.vstack(rows) if rows else np.zeros((0, n_cols), dtype=np.int64)
    perp = nullspace_mod(W, p, n_cols) if W.shape[0] else np.eye(n_cols, dtype=np.int64)
    Z = cocycle_space(c, j, p)
    best, best_size = None, None
    for block in _enumerate_span(Z, p, np.zeros(n_cols, dtype=np.int64)):
        bad = np.any((block @ perp.T) % p != 0, axis=1)
        if not bad.any():
            continue
        sizes = np.where(bad, np.count_nonzero(block, axis=1), n_cols + 1)
        k = int(np.argmin(sizes))
        if best_size is None or sizes[k] < best_size:
            best, best_size = block[k], int(sizes[k])
    if best is None:
        return None
    return Cochain.from_vector(c, j, ring, best)
