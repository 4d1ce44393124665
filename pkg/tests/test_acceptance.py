"""Acceptance criteria, one test each; every test prints a PASS/FAIL line."""

import time
from fractions import Fraction
from itertools import combinations
from math import exp, log

import numpy as np
import pytest

from randcomplex import (F2, Z, Cochain, Complex, DimParams, BetaSpec, DirectionParams,
                         E_constant, Fp, ProbabilityVector, cohomology,
                         critical_window_expectation, evaluate_pbar, exact_expected_Xjk,
                         find_Mhat_copies, hitting_time, is_cohom_connected, is_traversable,
                         lambda_mu_nu, mc_expectations, min_support_in_class,
                         minimal_bad_support, sample_process, worked_direction)
from randcomplex.cohomology import iter_cocycles
from randcomplex.parametrisation import lambda_exact, log_expected_Xjk, threshold_direction

import oracles
from strategies import build

pytestmark = pytest.mark.acceptance


def hat_copies(c, j):
    return [m for k in range(j, c.d + 1) for m in find_Mhat_copies(c, j, k)]


# 1 -------------------------------------------------------------------------

def test_c1_three_step_replay(verdict):
    t0 = time.perf_counter()
    g, g1, g2 = (build(4, 2, f) for f in (oracles.PATH, oracles.PATH_FLOWER,
                                          oracles.PATH_COVERED))
    flower = find_Mhat_copies(g1, 1, 2)
    checks = {
        "path connected": is_cohom_connected(g, 1, F2),
        "path has no copies": not hat_copies(g, 1),
        "flower rank 1": cohomology(g1, 1, F2).free_rank == 1,
        "flower copy present": ((1, 3, 4), (3,), 1, 2) in {m.key() for m in flower},
        # every extended copy of the flower closes the same shell {1,2,3}
        "flower copies share K and apex": {(m.K, m.a) for m in flower} == {((1, 3, 4), 2)},
        "covered connected": is_cohom_connected(g2, 1, F2),
        "covered has no copies": not hat_copies(g2, 1),
    }
    dt = time.perf_counter() - t0
    failed = [k for k, v in checks.items() if not v]
    verdict(1, not failed and dt < 1.0,
            f"{len(checks) - len(failed)}/{len(checks)} checks, {dt:.3f}s"
            + (f", failed: {failed}" if failed else ""))


# 2 -------------------------------------------------------------------------

def test_c2_copies_certify_nonvanishing(verdict):
    t0 = time.perf_counter()
    rng = np.random.default_rng(2)
    rings = (F2, Fp(3), Z)
    complexes = with_copies = counterexamples = 0
    while complexes < 1000:
        n = int(rng.integers(4, 9))
        d = int(rng.integers(2, 4))
        facets = oracles.random_facets(rng, n, d, float(rng.uniform(0.1, 0.9)))
        c = build(n, d, facets)
        complexes += 1
        for j in range(1, d):
            if hat_copies(c, j):
                with_copies += 1
                if any(cohomology(c, j, r).vanishes for r in rings):
                    counterexamples += 1
    dt = time.perf_counter() - t0
    verdict(2, counterexamples == 0 and with_copies > 0 and dt < 120,
            f"{complexes} complexes, {with_copies} (complex, j) with copies, "
            f"{counterexamples} counterexamples, {dt:.1f}s")


# 3 -------------------------------------------------------------------------

def _shape_violations(c, j, block) -> int:
    """Rows violating: empty in K, or covering K with >= k-j+1 pieces, flower if equal."""
    idx = c.index(j)
    bad = np.zeros(block.shape[0], dtype=bool)
    for k in range(j + 1, c.d + 1):
        for K in c.simplices(k):
            faces = list(combinations(K, j + 1))
            sub = block[:, [idx[f] for f in faces]] != 0
            size = sub.sum(axis=1)
            covered = np.ones(block.shape[0], dtype=bool)
            for v in K:
                covered &= sub[:, [i for i, f in enumerate(faces) if v in f]].any(axis=1)
            flowers = np.zeros(block.shape[0], dtype=bool)
            for C in combinations(K, j):
                mask = np.array([set(C) <= set(f) for f in faces])
                flowers |= np.all(sub == mask, axis=1)
            need = k - j + 1
            ok = (size == 0) | ((size >= need) & covered & ((size > need) | flowers))
            bad |= ~ok
    return int(bad.sum())


def test_c3_cocycle_support_shapes(verdict):
    t0 = time.perf_counter()
    rng = np.random.default_rng(3)
    cases = cocycles = violations = mismatched_counts = 0
    while cases < 300:
        n = int(rng.integers(4, 8))
        d = int(rng.integers(2, 4))
        c = build(n, d, oracles.random_facets(rng, n, d, float(rng.uniform(0.2, 0.9))))
        j = int(rng.integers(1, d))
        if not 0 < c.count(j) <= 14:
            continue
        cases += 1
        total = 0
        for block in iter_cocycles(c, j, 2):
            total += block.shape[0]
            violations += _shape_violations(c, j, block)
        cocycles += total
        layers = oracles.closure(c.facets(), n, d)
        mismatched_counts += total != oracles.all_cocycles_f2(layers, j).shape[0]
    dt = time.perf_counter() - t0
    verdict(3, violations == 0 and mismatched_counts == 0 and dt < 300,
            f"{cases} complexes, {cocycles} cocycles enumerated, {violations} violations, "
            f"{mismatched_counts} enumeration mismatches, {dt:.1f}s")


# 4 -------------------------------------------------------------------------

def test_c4_expectation_oracle(verdict):
    t0 = time.perf_counter()
    rng = np.random.default_rng(4)
    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(4, 8))
        d = int(rng.integers(2, 4))
        probs = rng.uniform(0, 0.9, d)
        pv = ProbabilityVector.from_probs(n, probs)
        p = {k: float(probs[k - 1]) for k in range(1, d + 1)}
        for j in range(1, d):
            for k in range(j, d + 1):
                want = oracles.expected_copies_bruteforce(n, d, j, k, p)
                got = exact_expected_Xjk(pv, j, k)
                worst = max(worst, abs(got - want) / want if want else abs(got))
    pv = evaluate_pbar(worked_direction(), 15)
    ws = mc_expectations(15, pv, 1.0, 10_000, seed=4, j=1)
    zs = {k: (ws.mean(k) - ws.exact_means[k]) / ws.se(k) for k in (1, 2)}
    dt = time.perf_counter() - t0
    ok = worst <= 1e-12 and all(abs(z) <= 3 for z in zs.values())
    verdict(4, ok, f"max relative error {worst:.2e}; Monte Carlo z-scores "
            + ", ".join(f"X_1,{k}: {z:+.2f}" for k, z in zs.items()) + f"; {dt:.1f}s")


# 5 -------------------------------------------------------------------------

def _log_form_configs():
    steep = DirectionParams(2, 1, (DimParams(Fraction(0), Fraction(0), BetaSpec.constant(1.0)),
                                   DimParams(Fraction(2), Fraction(0), BetaSpec.zero())))
    return {"worked": worked_direction(), "d3j2": threshold_direction(3, 2), "steep": steep}


def test_c5_criticality_identities(verdict):
    n = 10**5
    worst_identity, lam_mismatch, log_fail, log_checked = 0.0, 0, [], 0
    for name, dp in _log_form_configs().items():
        for c in (-1.0, 0.0, 0.5, 1.0):
            total = sum(critical_window_expectation(dp, n, c).values())
            E = E_constant(dp, n, c)
            if total:
                worst_identity = max(worst_identity, abs(E - total) / total)
        alpha = sum(dp.dim(i).alpha for i in range(dp.j + 1, dp.d + 1))
        rep = lambda_mu_nu(dp, n)
        pv = evaluate_pbar(dp, n)
        for k in rep.ks:
            # j + 1 - gamma_k - (k - j + 1) * sum_{i > j} alpha_i, in rationals
            if lambda_exact(dp, k) != dp.j + 1 - dp.dim(k).gamma - (k - dp.j + 1) * alpha:
                lam_mismatch += 1
            if not isinstance(rep.lam[k], Fraction):
                lam_mismatch += 1
            form = rep.exponent(k)
            gap = abs(log_expected_Xjk(pv, dp.j, k) - form)
            log_checked += 1
            if gap > 0.05 * abs(form) + 0.5:
                log_fail.append((name, k, round(gap, 3)))
    ok = worst_identity <= 1e-12 and lam_mismatch == 0 and not log_fail
    verdict(5, ok, f"identity rel. error {worst_identity:.1e}, lambda mismatches {lam_mismatch}, "
            f"log-form within slack {log_checked - len(log_fail)}/{log_checked}"
            + (f" failures {log_fail}" if log_fail else ""))


# 6 -------------------------------------------------------------------------

def test_c6_projective_plane(verdict):
    t0 = time.perf_counter()
    rp2 = build(6, 2, oracles.RP2)
    h1f2 = cohomology(rp2, 1, F2)
    h1, h2 = cohomology(rp2, 1, Z), cohomology(rp2, 2, Z)
    dt = time.perf_counter() - t0
    o1 = oracles.integral_cohomology(oracles.RP2, 6, 2, 1)
    o2 = oracles.integral_cohomology(oracles.RP2, 6, 2, 2)
    ok = (h1f2.free_rank == 1 and (h1.free_rank, list(h1.torsion)) == (0, []) == o1
          and (h2.free_rank, list(h2.torsion)) == (0, [2]) == o2 and dt < 1.0)
    verdict(6, ok, f"H1(F2) rank {h1f2.free_rank}, H1(Z) {h1.to_dict()}, H2(Z) {h2.to_dict()}, "
            f"oracle {o1} / {o2}, {dt:.3f}s")


# 7 -------------------------------------------------------------------------

def test_c7_poisson_window(verdict):
    t0 = time.perf_counter()
    dp, n, trials = worked_direction(), 500, 2000
    kb = lambda_mu_nu(dp, n).k_bar
    parts, ok = [], True
    for c in (-1.0, 0.0, 1.0):
        ws = mc_expectations(n, dp, 1 + c / log(n), trials, seed=7)
        tv = ws.tv_poisson(kb, ws.exact_means[kb])
        target = exp(-sum(ws.exact_means.values()))
        p0 = ws.pr_no_copies()
        ok &= tv <= 0.1 and abs(p0 - target) <= 0.05
        parts.append(f"c={c:+.0f}: TV(X_1,{kb}) {tv:.3f}, Pr(no copies) {p0:.3f} "
                     f"vs {target:.3f}")
    dt = time.perf_counter() - t0
    ok &= dt <= 1800
    verdict(7, ok, "; ".join(parts) + f"; {dt:.0f}s")


# 8 -------------------------------------------------------------------------

def test_c8_hitting_time_concentration(verdict):
    t0 = time.perf_counter()
    dp, trials = worked_direction(), 200
    medians, agree = {}, {}
    for n in (200, 400, 800):
        dev, same = [], 0
        for t in range(trials):
            tr = sample_process(n, dp, seed=8, tau_cap=2.0, stream=(n, t))
            rep = hitting_time(tr, 1, "fast")
            dev.append(abs(rep.tau_star - 1))
            same += rep.tau_doubleprime == rep.tau_star
        medians[n] = float(np.median(dev))
        agree[n] = same / trials
    dt = time.perf_counter() - t0
    monotone = medians[200] >= medians[400] >= medians[800]
    small = medians[800] <= 10 / log(800)
    coincide = all(a >= 0.9 for a in agree.values())
    detail = ("median |tau*-1| " + ", ".join(f"n={n}: {m:.4f}" for n, m in medians.items())
              + f" (nonincreasing {monotone}, bound {10 / log(800):.3f} met {small}); "
              + "Pr(tau'' = tau*) " + ", ".join(f"n={n}: {a:.2f}" for n, a in agree.items())
              + f" (>= 0.90 {coincide}); {dt:.0f}s")
    verdict(8, monotone and small and coincide and dt <= 1200, detail)


# 9 -------------------------------------------------------------------------

def test_c9_meshulam_wallach(verdict):
    t0 = time.perf_counter()
    rng = np.random.default_rng(9)
    checked = violations = minimality_checked = minimality_errors = 0
    for n in (5, 6, 7):
        for j in (1, 2):
            full = Complex.full(n, j + 1)
            layers = oracles.closure(full.facets(), n, j + 1)
            m = full.count(j)
            for r in range(100):
                vec = rng.integers(0, 2, m)
                f = min_support_in_class(full, Cochain.from_vector(full, j, F2, vec))
                support = set(f.values)
                D = oracles.coboundary_support_full(n, j, support)
                checked += 1
                violations += D * (j + 2) < n * len(support)
                # domain-side brute force where it is cheap enough
                if r < 10 and full.count(j - 1) <= 15:
                    minimality_checked += 1
                    best = oracles.min_support_bruteforce(layers, j, vec, 2)
                    minimality_errors += best != len(support)
    dt = time.perf_counter() - t0
    ok = violations == 0 and minimality_errors == 0 and dt <= 600
    verdict(9, ok, f"{checked} cochains, {violations} violations; minimum cross-checked on "
            f"{minimality_checked} ({minimality_errors} errors); {dt:.1f}s")


# 10 ------------------------------------------------------------------------

def _strip(rng):
    """Closed strip of triangles on a cyclic vertex order plus a little noise."""
    m = int(rng.integers(5, 8))
    n = m + int(rng.integers(0, 2))
    order = [int(v) for v in rng.permutation(np.arange(1, n + 1))[:m]]
    tris = [(order[i], order[(i + 1) % m], order[(i + 2) % m]) for i in range(m)]
    tris += [s for s in combinations(range(1, n + 1), 3) if rng.random() < 0.05]
    return build(n, 2, tris), 1


def _random_tops(rng):
    n = int(rng.integers(5, 8))
    d = int(rng.integers(2, 4))
    q = float(rng.uniform(0.15, 0.5))
    tops = [s for s in combinations(range(1, n + 1), 3) if rng.random() < q]
    if d == 3:
        tops += [s for s in combinations(range(1, n + 1), 4) if rng.random() < q / 4]
    return build(n, d, tops), int(rng.integers(1, d))


def test_c10_traversable_bad_supports(verdict):
    t0 = time.perf_counter()
    rng = np.random.default_rng(10)
    complexes = returned = violations = 0
    while complexes < 500:
        c, j = (_strip if complexes % 2 == 0 else _random_tops)(rng)
        if c.count(j) > 16:
            continue
        complexes += 1
        f = minimal_bad_support(c, j)
        if f is None:
            continue
        returned += 1
        w = is_traversable(c, sorted(f.values))
        violations += w is None or not (w.size_bound_ok and w.vertex_bound_ok)
    dt = time.perf_counter() - t0
    verdict(10, violations == 0 and returned > 0 and dt <= 300,
            f"{complexes} complexes, {returned} bad supports returned, {violations} "
            f"violations, {dt:.1f}s")
