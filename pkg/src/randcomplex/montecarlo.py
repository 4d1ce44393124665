"""Monte Carlo harness: obstruction counts in fixed-tau snapshots, Poisson
window statistics, threshold sweeps, and JSONL/CSV output with config echo."""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import log

import numpy as np
from scipy import stats

from .cohomology import cohomology, h1_dimension_f2_sparse
from .complex import Complex, connected_components
from .errors import InvalidInput
from .fastpath import counts_top
from .obstructions import find_M_copies, find_Mhat_copies
from .parametrisation import (DirectionParams, E_constant, ProbabilityVector,
                              critical_window_expectation, evaluate_pbar,
                              exact_expected_Xjk, lambda_mu_nu)
from .process import hitting_time, make_rng, sample_generators, sample_process
from .rings import F2

COHOMOLOGY_LIMIT = 400


def _complex(n: int, d: int, gens: dict) -> Complex:
    return Complex.from_generators(n, d, (tuple(int(v) for v in row)
                                          for k in sorted(gens) for row in gens[k]))


def count_copies(n: int, d: int, j: int, gens: dict) -> tuple[dict, dict, Complex | None]:
    """(X, Xhat) per k in [j, d]; vectorised when only the top two layers matter."""
    if j == d - 1:
        res = counts_top(n, j, gens)
        return res["X"], res["Xhat"], None
    c = _complex(n, d, gens)
    X = {k: len(find_M_copies(c, j, k)) for k in range(j, d + 1)}
    Xh = {k: len(find_Mhat_copies(c, j, k)) for k in range(j, d + 1)}
    return X, Xh, c


@dataclass
class WindowStats:
    n: int
    j: int
    tau: float
    ks: list
    X: np.ndarray
    Xhat: np.ndarray
    connected: np.ndarray | None = None
    exact_means: dict = field(default_factory=dict)
    limit_means: dict = field(default_factory=dict)

    @property
    def trials(self) -> int:
        return self.X.shape[0]

    def mean(self, k: int, hat: bool = False) -> float:
        return float((self.Xhat if hat else self.X)[:, self.ks.index(k)].mean())

    def var(self, k: int, hat: bool = False) -> float:
        col = (self.Xhat if hat else self.X)[:, self.ks.index(k)]
        return float(col.var(ddof=1)) if col.size > 1 else 0.0

    def se(self, k: int, hat: bool = False) -> float:
        return math.sqrt(self.var(k, hat) / self.trials)

    def distribution(self, k: int) -> dict[int, float]:
        vals, cnt = np.unique(self.X[:, self.ks.index(k)], return_counts=True)
        return {int(v): c / self.trials for v, c in zip(vals, cnt)}

    def pr_no_copies(self) -> float:
        return float(np.mean(self.X.sum(axis=1) == 0))

    def tv_poisson(self, k: int, mean: float) -> float:
        return tv_to_poisson(self.X[:, self.ks.index(k)], mean)

    def tv_joint(self, means: dict) -> float:
        """TV between the joint empirical law and a product of Poissons."""
        rows, cnt = np.unique(self.X, axis=0, return_counts=True)
        emp = cnt / self.trials
        mu = np.array([means.get(k, 0.0) for k in self.ks])
        q = np.prod([stats.poisson.pmf(rows[:, i], mu[i]) for i in range(len(self.ks))], axis=0)
        return 0.5 * (float(np.abs(emp - q).sum()) + max(0.0, 1.0 - float(q.sum())))

    def summary(self) -> dict:
        out = {"n": self.n, "j": self.j, "tau": self.tau, "trials": self.trials,
               "pr_no_copies": self.pr_no_copies()}
        for k in self.ks:
            out[f"mean_X{k}"] = self.mean(k)
            out[f"se_X{k}"] = self.se(k)
            out[f"mean_Xhat{k}"] = self.mean(k, True)
            if k in self.exact_means:
                out[f"exact_X{k}"] = self.exact_means[k]
                out[f"tv_exact_X{k}"] = self.tv_poisson(k, self.exact_means[k])
            if k in self.limit_means:
                out[f"limit_X{k}"] = self.limit_means[k]
        if self.connected is not None:
            out["pr_connected"] = float(np.mean(self.connected))
        return out


def tv_to_poisson(samples: np.ndarray, mean: float) -> float:
    samples = np.asarray(samples, dtype=np.int64)
    top = int(samples.max()) if samples.size else 0
    emp = np.bincount(samples, minlength=top + 1) / max(samples.size, 1)
    pmf = stats.poisson.pmf(np.arange(top + 1), mean)
    return 0.5 * (float(np.abs(emp - pmf).sum()) + float(stats.poisson.sf(top, mean)))


def _trial(args) -> tuple[list, list, int]:
    n, d, j, pv, seed, t, with_cohom = args
    rng = make_rng(seed, t)
    gens = sample_generators(rng, n, pv)
    X, Xh, c = count_copies(n, d, j, gens)
    conn = -1
    if with_cohom:
        c = c or _complex(n, d, gens)
        conn = int(len(connected_components(c)) == 1
                   and all(cohomology(c, i, F2).vanishes for i in range(1, j + 1)))
    ks = list(range(j, d + 1))
    return [X[k] for k in ks], [Xh[k] for k in ks], conn


def _run_trials(n, d, j, pv, trials, seed, threads, with_cohom):
    jobs = [(n, d, j, pv, seed, t, with_cohom) for t in range(trials)]
    if threads and threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            return list(ex.map(_trial, jobs, chunksize=max(1, trials // (4 * threads))))
    return [_trial(job) for job in jobs]


def mc_expectations(n: int, dp: DirectionParams | ProbabilityVector, tau: float, trials: int,
                    seed: int, threads: int = 1, with_cohom: bool = False,
                    j: int | None = None) -> WindowStats:
    """Counts of plain and extended copies in independent snapshots at fixed tau.

    dp may also be a bare probability vector at tau = 1, in which case j is required.
    """
    if trials < 1:
        raise InvalidInput("trials must be at least 1")
    if isinstance(dp, ProbabilityVector):
        if j is None or not 1 <= j <= dp.d:
            raise InvalidInput("a probability vector needs 1 <= j <= d")
        if dp.n != n:
            raise InvalidInput("n does not match the probability vector")
        pv, d = dp.scaled(tau), dp.d
    else:
        pv, d, j = evaluate_pbar(dp, n).scaled(tau), dp.d, dp.j
    res = _run_trials(n, d, j, pv, trials, seed, threads, with_cohom)
    ks = list(range(j, d + 1))
    X = np.array([r[0] for r in res], dtype=np.int64).reshape(trials, len(ks))
    Xh = np.array([r[1] for r in res], dtype=np.int64).reshape(trials, len(ks))
    conn = np.array([r[2] for r in res]) if with_cohom else None
    exact = {k: exact_expected_Xjk(pv, j, k) for k in ks}
    return WindowStats(n, j, tau, ks, X, Xh, conn, exact)


def mc_poisson_window(n: int, dp: DirectionParams, c: float, trials: int, seed: int,
                      threads: int = 1) -> WindowStats:
    """Snapshots at tau = 1 + c/log n compared with Poisson laws."""
    tau = 1 + c / log(n)
    affordable = n <= 12
    ws = mc_expectations(n, dp, tau, trials, seed, threads, with_cohom=affordable)
    ws.limit_means = critical_window_expectation(dp, n, c)
    return ws


def window_report(ws: WindowStats, dp: DirectionParams, c: float) -> dict:
    rep = lambda_mu_nu(dp, ws.n)
    kb = rep.k_bar if rep.k_bar is not None else ws.ks[-1]
    out = ws.summary()
    out.update({"c": c, "k_bar": kb, "E": E_constant(dp, ws.n, c),
                "tv_joint_exact": ws.tv_joint(ws.exact_means),
                "tv_joint_limit": ws.tv_joint(ws.limit_means),
                "exp_minus_sum_exact": math.exp(-sum(ws.exact_means.values()))})
    if ws.connected is not None:
        out["exp_minus_E"] = math.exp(-out["E"])
    return out


def hj_vanishes(c: Complex, j: int) -> bool | None:
    """H^j(c; F_2) = 0, or None when no method is affordable."""
    if j == 1:
        return h1_dimension_f2_sparse(c) == 0
    if c.count(j) <= COHOMOLOGY_LIMIT:
        return cohomology(c, j, F2).vanishes
    return None


def threshold_sweep(n_list, dp: DirectionParams, j: int, trials: int, seed: int,
                    tau_grid=(0.5, 0.8, 0.9, 1.0, 1.1, 1.2, 1.5), tau_cap: float = 2.0,
                    cohomology_checks: bool = True) -> list[dict]:
    """Per (n, tau): Pr(connected), Pr(H^j = 0) and the median hitting time."""
    if j != dp.j:
        raise InvalidInput("j must match the direction")
    cap = max(max(tau_grid), tau_cap)
    rows = []
    for n in n_list:
        topo = np.zeros((trials, len(tau_grid)))
        van = np.full((trials, len(tau_grid)), np.nan)
        stars = []
        for t in range(trials):
            tr = sample_process(n, dp, seed, tau_cap=cap, stream=(n, t))
            stars.append(hitting_time(tr, j).tau_star)
            for g, tau in enumerate(tau_grid):
                gens = tr.generators_until(tau)
                c = _complex(n, dp.d, gens)
                topo[t, g] = len(connected_components(c)) == 1
                if cohomology_checks:
                    v = hj_vanishes(c, j)
                    if v is not None:
                        van[t, g] = v
        med = float(np.median(stars))
        for g, tau in enumerate(tau_grid):
            col = van[:, g]
            rows.append({"n": n, "tau": tau, "trials": trials,
                         "pr_topologically_connected": float(topo[:, g].mean()),
                         "pr_Hj_zero": None if np.isnan(col).all() else float(np.nanmean(col)),
                         "median_tau_star": med})
    return rows


def write_records(records, config: dict, fmt: str = "jsonl", out=None) -> str:
    """Serialise records; the first line(s) echo the config."""
    buf = io.StringIO()
    if fmt == "jsonl":
        buf.write(json.dumps({"config": config}, sort_keys=True) + "\n")
        for r in records:
            buf.write(json.dumps(r, sort_keys=True, default=_jsonable) + "\n")
    elif fmt == "csv":
        buf.write("# config: " + json.dumps(config, sort_keys=True) + "\n")
        records = list(records)
        cols = sorted({k for r in records for k in r})
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        for r in records:
            w.writerow({k: _csv_value(r.get(k)) for k in cols})
    else:
        raise InvalidInput(f"unknown format {fmt!r}")
    text = buf.getvalue()
    if out is not None:
        out.write(text)
    return text


def _jsonable(x):
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    return str(x)


def _csv_value(v):
    if isinstance(v, (list, dict, tuple)):
        return json.dumps(v, default=_jsonable)
    return v
