"""Finite simplicial complexes on the vertex set {1, ..., n}.

A simplex is a strictly increasing tuple of vertex ids.  A complex keeps one
frozenset of simplices per dimension and is never mutated after construction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .errors import InvalidInput

Simplex = tuple[int, ...]


def simplex(vertices: Iterable[int]) -> Simplex:
    """Canonical (sorted) form of a vertex set."""
    s = tuple(sorted(int(v) for v in vertices))
    if len(set(s)) != len(s):
        raise InvalidInput(f"repeated vertex in {s}")
    return s


def faces(s: Simplex, size: int) -> list[Simplex]:
    """All sub-simplices of s with the given number of vertices."""
    return list(combinations(s, size))


def _check(s: Simplex, n: int, d: int) -> None:
    if not s or len(s) > d + 1:
        raise InvalidInput(f"simplex {s} has size outside [1, {d + 1}]")
    if s[0] < 1 or s[-1] > n:
        raise InvalidInput(f"simplex {s} has a vertex outside [1, {n}]")


@dataclass(frozen=True)
class Hypergraph:
    """Generating sets of a complex (not closed under subsets)."""

    n: int
    d: int
    edges: tuple[Simplex, ...]

    def __post_init__(self) -> None:
        for e in self.edges:
            _check(e, self.n, self.d)
            if len(e) < 2:
                raise InvalidInput(f"hyperedge {e} must have at least 2 vertices")


@dataclass(frozen=True, eq=True)
class Complex:
    """An immutable d-complex; layers[i] holds the i-simplices."""

    n: int
    d: int
    layers: tuple[frozenset, ...]
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    @classmethod
    def from_generators(cls, n: int, d: int, gens: Iterable[Sequence[int]]) -> "Complex":
        if n < 0 or d < 0:
            raise InvalidInput("n and d must be nonnegative")
        layers: list[set] = [set() for _ in range(d + 1)]
        layers[0].update((v,) for v in range(1, n + 1))
        seen: set = set()
        for g in gens:
            s = simplex(g)
            _check(s, n, d)
            if s in seen or s in layers[len(s) - 1]:
                continue
            seen.add(s)
            for size in range(2, len(s) + 1):
                layers[size - 1].update(combinations(s, size))
        return cls(n, d, tuple(frozenset(x) for x in layers))

    @classmethod
    def full(cls, n: int, d: int) -> "Complex":
        """All subsets of [n] with at most d+1 vertices."""
        top = min(d + 1, n)
        return cls(n, d, tuple(
            frozenset(combinations(range(1, n + 1), i + 1)) if i + 1 <= top else frozenset()
            for i in range(d + 1)))

    def __contains__(self, s: Sequence[int]) -> bool:
        s = tuple(s)
        return 1 <= len(s) <= self.d + 1 and s in self.layers[len(s) - 1]

    def __iter__(self):
        for i in range(self.d + 1):
            yield from self.simplices(i)

    def simplices(self, i: int) -> list[Simplex]:
        """Sorted list of i-simplices (empty outside [0, d])."""
        if i < 0 or i > self.d:
            return []
        key = ("sorted", i)
        if key not in self._cache:
            self._cache[key] = sorted(self.layers[i])
        return self._cache[key]

    def count(self, i: int) -> int:
        return len(self.layers[i]) if 0 <= i <= self.d else 0

    @property
    def dim(self) -> int:
        return max((i for i in range(self.d + 1) if self.layers[i]), default=-1)

    def index(self, i: int) -> dict[Simplex, int]:
        """Position of each i-simplex in the sorted order."""
        key = ("index", i)
        if key not in self._cache:
            self._cache[key] = {s: k for k, s in enumerate(self.simplices(i))}
        return self._cache[key]

    def link(self, L: Simplex) -> set[int]:
        """Vertices a with L + {a} a simplex."""
        size = len(L)
        key = ("link", size)
        if key not in self._cache:
            table: dict = {}
            if size <= self.d:
                for s in self.layers[size]:
                    for x in range(size + 1):
                        table.setdefault(s[:x] + s[x + 1:], set()).add(s[x])
            self._cache[key] = table
        return self._cache[key].get(tuple(L), set())

    def facets(self) -> list[Simplex]:
        """Inclusion-maximal simplices, sorted."""
        if "facets" not in self._cache:
            out = []
            for i in range(self.d + 1):
                covered = set()
                if i < self.d:
                    for s in self.layers[i + 1]:
                        covered.update(combinations(s, i + 1))
                out.extend(s for s in self.layers[i] if s not in covered)
            self._cache["facets"] = sorted(out)
        return self._cache["facets"]

    def facets_containing(self, J: Simplex) -> list[Simplex]:
        """Maximal simplices that contain J (empty if J is not a simplex)."""
        size = len(J)
        key = ("cofacets", size)
        if key not in self._cache:
            table: dict = {}
            for F in self.facets():
                if len(F) >= size:
                    for sub in combinations(F, size):
                        table.setdefault(sub, []).append(F)
            self._cache[key] = table
        return self._cache[key].get(tuple(J), [])

    def to_dict(self) -> dict:
        return {"n": self.n, "d": self.d, "facets": [list(f) for f in self.facets()]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, obj: dict) -> "Complex":
        try:
            n, d, facets = int(obj["n"]), int(obj["d"]), obj["facets"]
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"bad complex record: {exc}") from exc
        return cls.from_generators(n, d, facets)

    @classmethod
    def from_json(cls, text: str) -> "Complex":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"bad complex JSON: {exc}") from exc
        return cls.from_dict(obj)


def downward_closure(h: Hypergraph) -> Complex:
    return Complex.from_generators(h.n, h.d, h.edges)


def add_simplex(c: Complex, B: Sequence[int]) -> Complex:
    """The complex c + B: c together with every nonempty subset of B."""
    B = simplex(B)
    _check(B, c.n, c.d)
    if B in c:
        return c
    layers = [set(x) for x in c.layers]
    for size in range(1, len(B) + 1):
        layers[size - 1].update(combinations(B, size))
    return Complex(c.n, c.d, tuple(frozenset(x) for x in layers))


def is_shell(c: Complex, A: Sequence[int], j: int) -> bool:
    """True iff every (j+1)-subset of the (j+2)-set A is a j-simplex of c."""
    A = simplex(A)
    if len(A) != j + 2:
        raise InvalidInput(f"a {j}-shell needs {j + 2} vertices")
    return all(s in c for s in combinations(A, j + 1))


def shells_containing(c: Complex, B: Sequence[int]) -> list[int]:
    """Apex vertices a such that B + {a} is a shell of c."""
    B = simplex(B)
    if B not in c:
        return []
    cand = None
    for x in range(len(B)):
        nbrs = c.link(B[:x] + B[x + 1:])
        cand = set(nbrs) if cand is None else cand & nbrs
    if cand is None:
        cand = set(range(1, c.n + 1))
    return sorted(cand - set(B))


def connected_components(c: Complex) -> list[list[int]]:
    """Vertex classes joined by edges of c."""
    parent = list(range(c.n + 1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    if c.d >= 1:
        for u, v in c.layers[1]:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[max(ru, rv)] = min(ru, rv)
    groups: dict[int, list[int]] = {}
    for v in range(1, c.n + 1):
        groups.setdefault(find(v), []).append(v)
    return sorted(groups.values())


def skeleton(c: Complex, j: int) -> Complex:
    """All simplices of dimension at most j, keeping the cap d."""
    if j < 0:
        raise InvalidInput("skeleton degree must be nonnegative")
    return Complex(c.n, c.d, tuple(
        c.layers[i] if i <= j else frozenset() for i in range(c.d + 1)))
