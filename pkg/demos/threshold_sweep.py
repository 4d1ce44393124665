"""Connectivity and vanishing of H^1 across a grid of scaled times."""

import sys

from randcomplex import threshold_sweep, worked_direction, write_records

rows = threshold_sweep([30, 60, 90], worked_direction(), j=1, trials=20, seed=3,
                       tau_grid=(0.6, 0.8, 1.0, 1.2, 1.4))
write_records(rows, {"demo": "threshold_sweep", "seed": 3}, "csv", out=sys.stdout)
