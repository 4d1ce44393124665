"""Obstruction counts near the threshold against their Poisson limits."""

from math import exp

from randcomplex import lambda_mu_nu, mc_poisson_window, worked_direction
from randcomplex.montecarlo import window_report

direction = worked_direction()
n, trials = 150, 300

print("criticality at n =", n, lambda_mu_nu(direction, n).to_dict())

for c in (-1.0, 0.0, 1.0):
    ws = mc_poisson_window(n, direction, c, trials, seed=1)
    rep = window_report(ws, direction, c)
    means = {k: round(ws.mean(k), 3) for k in ws.ks}
    exact = {k: round(v, 3) for k, v in ws.exact_means.items()}
    print(f"c = {c:+.0f}: sample means {means}, exact {exact}")
    print(f"   Pr(no copies) = {ws.pr_no_copies():.3f}, "
          f"exp(-sum) = {exp(-sum(ws.exact_means.values())):.3f}, "
          f"TV(joint) = {rep['tv_joint_exact']:.3f}")
