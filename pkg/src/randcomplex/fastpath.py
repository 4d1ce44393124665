"""Vectorised obstruction counts and hitting times when j = d - 1.

With only two relevant layers (j-generators and top generators of size j+2) a
j-simplex is localised in a top K exactly when K is the only top containing it,
so every quantity reduces to face multiplicities and first/second birth times.
"""

from __future__ import annotations

import math
from itertools import combinations

import numpy as np

from .errors import InvalidInput
from .process import HittingReport, ProcessTrace, encode, tau_prime


def face_codes(tops: np.ndarray, n: int) -> np.ndarray:
    """codes[t, x] encodes tops[t] with its x-th vertex removed."""
    m, s = tops.shape
    out = np.zeros((m, s), dtype=np.int64)
    for x in range(s):
        out[:, x] = encode(np.delete(tops, x, axis=1), n)
    return out


def _lookup(codes: np.ndarray, keys: np.ndarray, values: np.ndarray, missing: float):
    """values[position of code in sorted keys], or missing."""
    if keys.size == 0:
        return np.full(codes.shape, missing)
    pos = np.clip(np.searchsorted(keys, codes), 0, keys.size - 1)
    hit = keys[pos] == codes
    return np.where(hit, values[pos], missing)


def _side_codes(base: tuple[int, ...], apex: np.ndarray, n: int) -> np.ndarray:
    """codes[a, x]: base minus its x-th vertex plus apex a."""
    out = np.zeros((apex.size, len(base)), dtype=np.int64)
    for x in range(len(base)):
        rest = np.array(base[:x] + base[x + 1:], dtype=np.int64)
        rows = np.column_stack([np.broadcast_to(rest, (apex.size, rest.size)), apex])
        out[:, x] = encode(np.sort(rows, axis=1), n)
    return out


def _apexes(n: int, K) -> np.ndarray:
    mask = np.ones(n + 1, dtype=bool)
    mask[0] = False
    mask[list(K)] = False
    return np.flatnonzero(mask)


def count_apexes(base, K, n: int, present: np.ndarray) -> int:
    """Number of a outside K with base + {a} a shell; present holds sorted j-simplex codes."""
    apex = _apexes(n, K)
    if apex.size == 0:
        return 0
    sides = _side_codes(tuple(base), apex, n)
    ok = _lookup(sides, present, np.ones(present.size, dtype=bool), False).astype(bool)
    return int(np.count_nonzero(np.all(ok, axis=1)))


def counts_top(n: int, j: int, gens: dict, with_hat: bool = True) -> dict:
    """X and Xhat for k = j and k = j+1 from generators of sizes j+1 and j+2."""
    tops = gens.get(j + 1, np.zeros((0, j + 2), dtype=np.int32))
    low = gens.get(j, np.zeros((0, j + 1), dtype=np.int32))
    F = face_codes(tops, n) if tops.size else np.zeros((0, j + 2), dtype=np.int64)
    uniq, inv, cnt = np.unique(F.ravel(), return_inverse=True, return_counts=True)
    mult = cnt[inv].reshape(F.shape)
    single = mult == 1
    u = single.sum(axis=1)
    X_top = int(np.sum(u * (u - 1) // 2))
    lcodes = encode(low, n) if low.size else np.zeros(0, dtype=np.int64)
    isolated = ~np.isin(lcodes, uniq)
    X_low = int(np.count_nonzero(isolated))
    out = {"X": {j: X_low, j + 1: X_top}}
    if not with_hat:
        return out
    present = np.union1d(uniq, lcodes)
    hat_low = 0
    for e in low[isolated]:
        e = tuple(int(v) for v in e)
        hat_low += count_apexes(e, e, n, present)
    hat_top = 0
    for t in np.flatnonzero(u >= 2):
        K = tuple(int(v) for v in tops[t])
        free = [x for x in range(j + 2) if single[t, x]]
        for x, y in combinations(free, 2):
            C = tuple(v for i, v in enumerate(K) if i not in (x, y))
            for w in (K[x], K[y]):
                hat_top += count_apexes(tuple(sorted(C + (w,))), K, n, present)
    out["Xhat"] = {j: hat_low, j + 1: hat_top}
    return out


def hitting_time_top(tr: ProcessTrace, j: int) -> HittingReport:
    """Exact hitting times from per-copy lifetimes instead of a per-event rescan.

    A plain copy (K, C) lives on [birth of K, first later birth of a top sharing a
    petal); its extension lives from the earliest completed shell onwards.
    """
    d, n = tr.d, tr.n
    if j != d - 1:
        raise InvalidInput("the vectorised path needs j = d - 1")
    tops, ttop = tr.sets[d], tr.taus[d]
    low = tr.sets.get(j, np.zeros((0, j + 1), dtype=np.int32))
    tlow = tr.taus.get(j, np.zeros(0))
    # tops in birth order, so the first top on a face is the one with the smallest row
    by_time = np.argsort(ttop, kind="stable")
    tops, ttop = tops[by_time], ttop[by_time]
    m = tops.shape[0]
    F = face_codes(tops, n) if m else np.zeros((0, j + 2), dtype=np.int64)
    flat, ftau = F.ravel(), np.repeat(ttop, j + 2)
    order = np.argsort(flat, kind="stable")
    sc, st, stop = flat[order], ftau[order], order // (j + 2)
    new_group = np.r_[True, sc[1:] != sc[:-1]] if sc.size else np.zeros(0, bool)
    starts = np.flatnonzero(new_group)
    ucodes = sc[starts]
    sizes = np.diff(np.r_[starts, sc.size])
    first_top = stop[starts]
    b1 = st[starts]
    b2 = np.where(sizes > 1, st[np.minimum(starts + 1, max(sc.size - 1, 0))], np.inf)
    G = np.empty(flat.size, dtype=np.int64)
    G[order] = np.cumsum(new_group) - 1
    G = G.reshape(F.shape)

    lcodes = encode(low, n) if low.size else np.zeros(0, dtype=np.int64)
    allc = np.concatenate([ucodes, lcodes])
    allt = np.concatenate([b1, tlow])
    o = np.lexsort((allt, allc))
    allc, allt = allc[o], allt[o]
    keep = np.r_[True, allc[1:] != allc[:-1]] if allc.size else np.zeros(0, bool)
    pres_codes, pres_time = allc[keep], allt[keep]

    def shell_start(base, K) -> float:
        apex = _apexes(n, K)
        if apex.size == 0:
            return math.inf
        sides = _side_codes(tuple(base), apex, n)
        t = _lookup(sides, pres_codes, pres_time, np.inf).max(axis=1)
        return float(t.min())

    # candidate columns: end, start, kind (-1 for a j-hyperedge, else petal pair index), row
    pairs = list(combinations(range(j + 2), 2))
    ends, starts_, kinds, rows = [], [], [], []
    if m:
        first = first_top[G] == np.arange(m)[:, None]
        B2 = b2[G]
        for q, (x, y) in enumerate(pairs):
            t = np.flatnonzero(first[:, x] & first[:, y])
            ends.append(np.minimum(B2[t, x], B2[t, y]))
            starts_.append(ttop[t])
            kinds.append(np.full(t.size, q))
            rows.append(t)
    if low.size:
        cover = _lookup(lcodes, ucodes, b1, np.inf)
        e = np.flatnonzero(tlow < cover)
        ends.append(cover[e])
        starts_.append(tlow[e])
        kinds.append(np.full(e.size, -1))
        rows.append(e)
    if ends:
        ends, starts_ = np.concatenate(ends), np.concatenate(starts_)
        kinds, rows = np.concatenate(kinds), np.concatenate(rows)
    else:
        ends = starts_ = kinds = rows = np.zeros(0)
    order = np.lexsort((starts_, -ends))

    tp = tau_prime(n, d)
    tau_star, ell, truncated = 0.0, None, False
    lives = []
    for i in order:
        end, start = float(ends[i]), float(starts_[i])
        if ell is not None and end < tau_star and end <= tp:
            break
        if kinds[i] < 0:
            K = tuple(int(v) for v in low[rows[i]])
            k, bases = j, [K]
        else:
            K = tuple(int(v) for v in tops[rows[i]])
            x, y = pairs[kinds[i]]
            C = tuple(v for q, v in enumerate(K) if q not in (x, y))
            k, bases = d, [tuple(sorted(C + (w,))) for w in (K[x], K[y])]
        s = max(start, min(shell_start(b, K) for b in bases))
        if s >= end:
            continue
        if end > tp:
            lives.append((s, end))
        if ell is None:
            tau_star, ell = end, k
            truncated = math.isinf(end)
        elif end == tau_star:
            # several copies may die at the same event
            ell = min(ell, k)
    no_copies = ell is None
    times = tr.event_times()
    nxt = np.searchsorted(times, tp, side="right")
    tdp = float(times[nxt]) if nxt < times.size else None
    if tdp is not None:
        for s, e in sorted(lives):
            if s <= tdp < e:
                tdp = e
        if math.isinf(tdp):
            tdp = None
    return HittingReport(tau_star, ell, tdp, tp, no_copies=no_copies, truncated=truncated)
