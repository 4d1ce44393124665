"""Independent reference implementations used to check the library.

Nothing here imports the library's linear algebra, coboundaries or counting
code; everything is rebuilt from facet lists by the most direct method.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product
from math import gcd

import numpy as np

# three small complexes on [4]: a path, then a triangle that leaves two edges
# localised, then a triangle that covers one of those edges
PATH = [(1, 2), (2, 3), (3, 4)]
PATH_FLOWER = PATH + [(1, 3, 4)]
PATH_COVERED = PATH_FLOWER + [(1, 2, 3)]

# the 6-vertex triangulation of the real projective plane
RP2 = [(1, 2, 4), (1, 2, 6), (1, 3, 5), (1, 3, 6), (1, 4, 5),
       (2, 3, 4), (2, 3, 5), (2, 5, 6), (3, 4, 6), (4, 5, 6)]


def closure(facets, n: int, d: int) -> list[list[tuple]]:
    """Simplices by dimension, each list sorted."""
    layers = [set() for _ in range(d + 1)]
    layers[0] = {(v,) for v in range(1, n + 1)}
    for f in facets:
        f = tuple(sorted(f))
        for size in range(1, len(f) + 1):
            layers[size - 1].update(combinations(f, size))
    return [sorted(x) for x in layers]


def coboundary(layers, j: int) -> np.ndarray:
    """Integer coboundary from degree j to j+1, built by removing one vertex at a time."""
    cols = {s: i for i, s in enumerate(layers[j])} if j < len(layers) else {}
    rows = layers[j + 1] if j + 1 < len(layers) else []
    M = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for r, s in enumerate(rows):
        for i in range(len(s)):
            M[r, cols[s[:i] + s[i + 1:]]] += (-1) ** i
    return M


def rank_mod_p(M: np.ndarray, p: int) -> int:
    """Textbook Gaussian elimination on Python ints."""
    A = [[int(x) % p for x in row] for row in M]
    rank, cols = 0, (len(A[0]) if A else 0)
    for col in range(cols):
        piv = next((r for r in range(rank, len(A)) if A[r][col]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        inv = pow(A[rank][col], -1, p)
        A[rank] = [(x * inv) % p for x in A[rank]]
        for r in range(len(A)):
            if r != rank and A[r][col]:
                f = A[r][col]
                A[r] = [(x - f * y) % p for x, y in zip(A[r], A[rank])]
        rank += 1
    return rank


def rank_rational(M: np.ndarray) -> int:
    """Exact rank over Q with fractions."""
    A = [[Fraction(int(x)) for x in row] for row in M]
    rank, cols = 0, (len(A[0]) if A else 0)
    for col in range(cols):
        piv = next((r for r in range(rank, len(A)) if A[r][col] != 0), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        for r in range(len(A)):
            if r != rank and A[r][col] != 0:
                f = A[r][col] / A[rank][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[rank])]
        rank += 1
    return rank


def betti_mod_p(facets, n: int, d: int, j: int, p: int) -> int:
    L = closure(facets, n, d)
    up = rank_mod_p(coboundary(L, j), p) if j + 1 <= d else 0
    down = rank_mod_p(coboundary(L, j - 1), p) if j >= 1 else 0
    return len(L[j]) - up - down


def betti_rational(facets, n: int, d: int, j: int) -> int:
    L = closure(facets, n, d)
    up = rank_rational(coboundary(L, j)) if j + 1 <= d else 0
    down = rank_rational(coboundary(L, j - 1)) if j >= 1 else 0
    return len(L[j]) - up - down


def bareiss_det(M) -> int:
    A = [list(map(int, row)) for row in M]
    n = len(A)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if A[r][k]), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for jj in range(k + 1, n):
                A[i][jj] = (A[i][jj] * A[k][k] - A[i][k] * A[k][jj]) // prev
        prev = A[k][k]
    return sign * A[-1][-1]


def determinantal_divisors(M: np.ndarray) -> list[int]:
    """Nonzero diagonal of the Smith form as ratios of gcds of k x k minors."""
    rows, cols = M.shape
    out, last = [], 1
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for R in combinations(range(rows), k):
            for C in combinations(range(cols), k):
                g = gcd(g, bareiss_det(M[np.ix_(R, C)]))
        if g == 0:
            break
        out.append(g // last)
        last = g
    return out


def smith_sympy(M: np.ndarray) -> list[int]:
    """Nonzero Smith diagonal from sympy's normal form routine."""
    from sympy import Matrix, ZZ
    from sympy.matrices.normalforms import smith_normal_form
    if M.size == 0:
        return []
    S = smith_normal_form(Matrix(M.tolist()), domain=ZZ)
    diag = [abs(int(S[i, i])) for i in range(min(S.shape))]
    return sorted(x for x in diag if x)


def integral_cohomology(facets, n: int, d: int, j: int) -> tuple[int, list[int]]:
    """(free rank, torsion) of H^j over Z via sympy Smith forms."""
    L = closure(facets, n, d)
    here = smith_sympy(coboundary(L, j)) if j + 1 <= d else []
    below = smith_sympy(coboundary(L, j - 1)) if j >= 1 else []
    free = len(L[j]) - len(here) - len(below)
    return free, sorted(x for x in below if x > 1)


def expected_copies_bruteforce(n: int, d: int, j: int, k: int, p: dict) -> float:
    """Sum over every (K, C) of p_k times the chance no forbidden generator is drawn."""
    V = range(1, n + 1)
    higher = {i: [frozenset(G) for G in combinations(V, i + 1)] for i in range(j + 1, d + 1)}
    total = 0.0
    for K in combinations(V, k + 1):
        Kset = frozenset(K)
        centres = [K[:j]] if k == j else list(combinations(K, j))
        for C in centres:
            petals = [Kset] if k == j else [frozenset(C) | {w} for w in K if w not in C]
            prob = p[k]
            for i, sets in higher.items():
                for G in sets:
                    if not G <= Kset and any(P <= G for P in petals):
                        prob *= 1 - p[i]
            total += prob
    return total


def localised(layers, J: tuple, K: tuple) -> bool:
    Kset = set(K)
    for layer in layers:
        for s in layer:
            if set(J) <= set(s) and not set(s) <= Kset:
                return False
    return True


def plain_copies_bruteforce(facets, n: int, d: int, j: int, k: int) -> set[tuple]:
    """(K, C) pairs whose petals are all K-localised, straight from the definition."""
    L = closure(facets, n, d)
    out = set()
    for K in L[k]:
        if k == j:
            if localised(L, K, K):
                out.add((K, K[:j]))
            continue
        for C in combinations(K, j):
            petals = [tuple(sorted(C + (w,))) for w in K if w not in C]
            if all(localised(L, P, K) for P in petals):
                out.add((K, C))
    return out


def all_cocycles_f2(layers, j: int) -> np.ndarray:
    """Every F_2 j-cocycle as a 0/1 row, by exhaustive enumeration."""
    m = len(layers[j])
    vecs = np.array(list(product((0, 1), repeat=m)), dtype=np.int64).reshape(-1, m)
    if j + 1 >= len(layers) or not layers[j + 1]:
        return vecs
    D = coboundary(layers, j) % 2
    return vecs[np.all((vecs @ D.T) % 2 == 0, axis=1)]


def support_shape_ok(layers, support: list[tuple], j: int) -> bool:
    """Inside every higher simplex K the support is empty, or covers K with at least
    k-j+1 pieces, and exactly k-j+1 pieces only when they form a flower."""
    S = set(support)
    for k in range(j + 1, len(layers)):
        for K in layers[k]:
            SK = [s for s in S if set(s) <= set(K)]
            if not SK:
                continue
            if len(SK) < k - j + 1 or set().union(*map(set, SK)) != set(K):
                return False
            if len(SK) == k - j + 1 and not is_flower(SK, K, j):
                return False
    return True


def is_flower(pieces: list[tuple], K: tuple, j: int) -> bool:
    for C in combinations(K, j):
        if {tuple(sorted(C + (w,))) for w in K if w not in C} == set(pieces):
            return True
    return False


def min_support_bruteforce(layers, j: int, vec: np.ndarray, p: int) -> int:
    """Smallest support size in vec + image of the coboundary, over every preimage."""
    if j == 0:
        return int(np.count_nonzero(vec % p))
    D = coboundary(layers, j - 1) % p
    m = D.shape[1]
    best = int(np.count_nonzero(vec % p))
    gs = np.array(list(product(range(p), repeat=m)), dtype=np.int64).reshape(-1, m)
    for start in range(0, gs.shape[0], 1 << 14):
        block = (vec + gs[start:start + (1 << 14)] @ D.T) % p
        best = min(best, int(np.count_nonzero(block, axis=1).min()))
    return best


def coboundary_support_full(n: int, j: int, support: set) -> int:
    """|supp(coboundary f)| for an F_2 cochain f on the full simplex on [n]."""
    count = 0
    for s in combinations(range(1, n + 1), j + 2):
        hits = sum(1 for t in combinations(s, j + 1) if t in support)
        count += hits % 2
    return count


def joined_by_higher(layers, S: list[tuple], j: int) -> bool:
    """S cannot be split in two without some higher simplex meeting both parts."""
    S = list(S)
    if len(S) <= 1:
        return True
    parent = list(range(len(S)))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for k in range(j + 1, len(layers)):
        for sigma in layers[k]:
            inside = [i for i, s in enumerate(S) if set(s) <= set(sigma)]
            for i in inside[1:]:
                parent[find(i)] = find(inside[0])
    return len({find(i) for i in range(len(S))}) == 1


def random_facets(rng: np.random.Generator, n: int, d: int, density: float) -> list[tuple]:
    """Generators of every size 2..d+1 kept independently with a size-dependent rate."""
    out = []
    for size in range(2, d + 2):
        rate = density ** (size - 1)
        for s in combinations(range(1, n + 1), size):
            if rng.random() < rate:
                out.append(s)
    return out

