"""The birth-time process: sampling, snapshots and replayed hitting times."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from math import comb, log

import numpy as np

from .cohomology import is_cohom_connected
from .complex import Complex, Simplex, add_simplex, simplex
from .errors import GuardExceeded, InvalidInput
from .obstructions import find_Mhat_copies
from .parametrisation import DirectionParams, ProbabilityVector, evaluate_pbar
from .rings import F2, Ring

MEMORY_CAP = 20_000_000
DENSE_LIMIT = 2_000_000


def make_rng(seed, *stream: int) -> np.random.Generator:
    """Counter-based generator for (seed, stream...)."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), *stream])))


_ALL_SETS: dict = {}


def all_subsets(n: int, size: int) -> np.ndarray:
    """Every size-subset of [n] as rows, in lexicographic order."""
    key = (n, size)
    if key not in _ALL_SETS:
        m = comb(n, size)
        if m > DENSE_LIMIT:
            raise GuardExceeded(f"{m} subsets of size {size} exceed {DENSE_LIMIT}")
        arr = np.fromiter((v for s in combinations(range(1, n + 1), size) for v in s),
                          dtype=np.int32, count=m * size).reshape(m, size)
        if len(_ALL_SETS) > 32:
            _ALL_SETS.clear()
        _ALL_SETS[key] = arr
    return _ALL_SETS[key]


def encode(rows: np.ndarray, n: int) -> np.ndarray:
    """Injective int64 code of sorted vertex rows."""
    code = np.zeros(rows.shape[0], dtype=np.int64)
    for col in range(rows.shape[1]):
        code = code * (n + 1) + rows[:, col]
    return code


def decode(codes: np.ndarray, n: int, size: int) -> np.ndarray:
    out = np.zeros((codes.size, size), dtype=np.int32)
    c = codes.copy()
    for col in range(size - 1, -1, -1):
        out[:, col] = c % (n + 1)
        c //= n + 1
    return out


def sample_subsets(rng: np.random.Generator, n: int, size: int, m: int) -> np.ndarray:
    """m distinct uniform size-subsets of [n] (rows sorted), without enumerating all."""
    if m == 0:
        return np.zeros((0, size), dtype=np.int32)
    if m > comb(n, size):
        raise InvalidInput("more subsets requested than exist")
    got = np.zeros(0, dtype=np.int64)
    while got.size < m:
        need = m - got.size
        draw = np.sort(rng.integers(1, n + 1, size=(int(need * 1.2) + 16, size)), axis=1)
        ok = np.all(np.diff(draw, axis=1) > 0, axis=1)
        codes = encode(draw[ok], n)
        _, first = np.unique(codes, return_index=True)
        codes = codes[np.sort(first)]
        codes = codes[~np.isin(codes, got)]
        got = np.concatenate([got, codes[:need]])
    return decode(got, n, size)


def sample_generators(rng: np.random.Generator, n: int, pv: ProbabilityVector
                      ) -> dict[int, np.ndarray]:
    """Independent generators of each dimension k with probability p_k."""
    out = {}
    for k in range(1, pv.d + 1):
        p = pv.at(k)
        if p <= 0 or k + 1 > n:
            out[k] = np.zeros((0, k + 1), dtype=np.int32)
            continue
        total = comb(n, k + 1)
        if total <= DENSE_LIMIT:
            keep = rng.random(total) < p
            out[k] = all_subsets(n, k + 1)[keep]
        else:
            out[k] = sample_subsets(rng, n, k + 1, int(rng.binomial(total, p)))
    return out


@dataclass
class ProcessTrace:
    """Scaled birth times of every generator that is born up to tau_cap."""

    n: int
    d: int
    pbar: tuple[float, ...]
    seed: int | None
    tau_cap: float | None
    sets: dict = field(default_factory=dict)
    taus: dict = field(default_factory=dict)

    @property
    def tau_max(self) -> float:
        if self.pbar[-1] > 0:
            return 1.0 / self.pbar[-1]
        return max((1.0 / p for p in self.pbar if p > 0), default=0.0)

    def birth_times(self, k: int) -> np.ndarray:
        """Unscaled birth times t_K = tau_K * pbar_k."""
        return self.taus[k] * self.pbar[k - 1]

    @property
    def events(self) -> list[tuple[float, Simplex]]:
        """All births sorted by time, ties broken lexicographically."""
        if not hasattr(self, "_events"):
            ev = []
            for k in sorted(self.sets):
                ev.extend((float(t), tuple(int(v) for v in s))
                          for t, s in zip(self.taus[k], self.sets[k]))
            ev.sort()
            self._events = ev
        return self._events

    def event_times(self) -> np.ndarray:
        arrs = [self.taus[k] for k in self.taus if self.taus[k].size]
        return np.sort(np.concatenate(arrs)) if arrs else np.zeros(0)

    def generators_until(self, tau: float) -> dict[int, np.ndarray]:
        if self.tau_cap is not None and tau > self.tau_cap:
            raise InvalidInput(f"tau {tau} beyond the sampled range {self.tau_cap}")
        return {k: self.sets[k][self.taus[k] <= tau] for k in self.sets}

    @classmethod
    def from_events(cls, n: int, d: int, events) -> "ProcessTrace":
        """A scripted trace; pbar is set to 1 in every dimension."""
        tr = cls(n, d, tuple(1.0 for _ in range(d)), None, None)
        by_k: dict[int, list] = {}
        for tau, s in events:
            s = simplex(s)
            if not 2 <= len(s) <= d + 1:
                raise InvalidInput(f"bad generator {s}")
            by_k.setdefault(len(s) - 1, []).append((float(tau), s))
        for k in range(1, d + 1):
            rows = by_k.get(k, [])
            tr.sets[k] = np.array([s for _, s in rows], dtype=np.int32).reshape(-1, k + 1)
            tr.taus[k] = np.array([t for t, _ in rows], dtype=np.float64)
        return tr


def _pbar(dp_or_pbar, n: int) -> tuple[float, ...]:
    if isinstance(dp_or_pbar, DirectionParams):
        return evaluate_pbar(dp_or_pbar, n).raw
    if isinstance(dp_or_pbar, ProbabilityVector):
        return dp_or_pbar.raw
    return tuple(float(x) for x in dp_or_pbar)


def sample_process(n: int, dp, seed: int, tau_cap: float | None = None,
                   memory_cap: int = MEMORY_CAP, stream: tuple[int, ...] = ()) -> ProcessTrace:
    """Sample birth times; with tau_cap, only generators born by tau_cap are drawn.

    The truncated trace has exactly the law of the full one restricted to [0, tau_cap].
    """
    pbar = _pbar(dp, n)
    d = len(pbar)
    rng = make_rng(seed, *stream)
    tr = ProcessTrace(n, d, pbar, seed, tau_cap)
    expected = 0.0
    for k in range(1, d + 1):
        p = pbar[k - 1]
        if p > 0:
            frac = 1.0 if tau_cap is None else min(1.0, tau_cap * p)
            expected += comb(n, k + 1) * frac
    if expected > memory_cap:
        raise GuardExceeded(f"about {expected:.3g} generators exceed the cap {memory_cap}")
    for k in range(1, d + 1):
        p = pbar[k - 1]
        if p <= 0 or k + 1 > n:
            tr.sets[k] = np.zeros((0, k + 1), dtype=np.int32)
            tr.taus[k] = np.zeros(0)
            continue
        if tau_cap is None or tau_cap * p >= 1.0:
            sets = all_subsets(n, k + 1)
            t = rng.random(sets.shape[0])
            taus = t / p
            if tau_cap is not None:
                keep = taus <= tau_cap
                sets, taus = sets[keep], taus[keep]
        else:
            m = int(rng.binomial(comb(n, k + 1), tau_cap * p))
            sets = sample_subsets(rng, n, k + 1, m)
            taus = rng.random(m) * tau_cap
        tr.sets[k] = sets
        tr.taus[k] = taus
    return tr


def snapshot(tr: ProcessTrace, tau: float) -> Complex:
    """The complex generated by everything born by time tau."""
    gens = tr.generators_until(tau)
    return Complex.from_generators(tr.n, tr.d, (tuple(int(v) for v in row)
                                                for k in sorted(gens) for row in gens[k]))


def tau_prime(n: int, d: int) -> float:
    return 1.0 - log(log(n)) / (10 * d * log(n))


@dataclass
class HittingReport:
    tau_star: float
    ell: int | None
    tau_doubleprime: float | None
    tau_prime: float
    no_copies: bool = False
    truncated: bool = False
    connected_intervals: list | None = None

    def to_dict(self) -> dict:
        return {"tau_star": self.tau_star, "ell": self.ell,
                "tau_doubleprime": self.tau_doubleprime, "tau_prime": self.tau_prime,
                "no_copies": self.no_copies, "truncated": self.truncated,
                "connected_intervals": self.connected_intervals}


def _hat_copies(c: Complex, j: int) -> list:
    return [m for k in range(j, c.d + 1) for m in find_Mhat_copies(c, j, k)]


def replay_states(tr: ProcessTrace, max_events: int = 20000):
    """Yield (tau, complex) before any event and after each event."""
    events = tr.events
    if len(events) > max_events:
        raise GuardExceeded(f"{len(events)} events exceed the replay limit {max_events}")
    c = Complex.from_generators(tr.n, tr.d, [])
    yield 0.0, c
    for tau, s in events:
        c = add_simplex(c, s)
        yield tau, c


def hitting_time_replay(tr: ProcessTrace, j: int) -> HittingReport:
    """Full rescan after each event."""
    taus, present, last_copies = [], [], None
    for tau, c in replay_states(tr):
        hats = _hat_copies(c, j)
        taus.append(tau)
        present.append(bool(hats))
        if hats:
            last_copies = hats
    tp = tau_prime(tr.n, tr.d)
    after = [i for i in range(1, len(taus)) if taus[i] > tp and not present[i]]
    tdp = taus[after[0]] if after else None
    if not any(present):
        return HittingReport(0.0, None, tdp, tp, no_copies=True)
    L = max(i for i, p in enumerate(present) if p)
    ell = min(m.k for m in last_copies)
    if L == len(taus) - 1:
        return HittingReport(math.inf, ell, tdp, tp, truncated=True)
    return HittingReport(taus[L + 1], ell, tdp, tp)


def hitting_time(tr: ProcessTrace, j: int, method: str = "auto") -> HittingReport:
    """Last time an extended obstruction exists, plus the first clean event after tau'."""
    if method == "auto":
        method = "fast" if j == tr.d - 1 else "replay"
    if method == "replay":
        return hitting_time_replay(tr, j)
    if method == "fast":
        from .fastpath import hitting_time_top
        return hitting_time_top(tr, j)
    raise InvalidInput(f"unknown method {method!r}")


def connectedness_intervals(tr: ProcessTrace, j: int, ring: Ring = F2,
                            max_events: int = 2000) -> list[tuple[float, float]]:
    """Maximal tau-intervals [start, end) on which the snapshot is j-cohom-connected."""
    if len(tr.events) > max_events:
        raise GuardExceeded(f"{len(tr.events)} events exceed {max_events} cohomology checks")
    out: list[tuple[float, float]] = []
    start = None
    for tau, c in replay_states(tr, max_events):
        ok = is_cohom_connected(c, j, ring)
        if ok and start is None:
            start = tau
        elif not ok and start is not None:
            out.append((start, tau))
            start = None
    if start is not None:
        out.append((start, tr.tau_max))
    return out
