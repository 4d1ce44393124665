"""Watch a flower-shaped obstruction appear and disappear in a tiny complex."""

from randcomplex import (Complex, F2, ProcessTrace, cohomology, connectedness_intervals,
                         find_Mhat_copies, hitting_time, minimal_bad_support, simplex)
from randcomplex.complex import add_simplex

# a path 1-2-3-4, then a triangle hanging off the last edge, then one covering 1-2-3
steps = [(1, 2), (2, 3), (3, 4), (1, 3, 4), (1, 2, 3)]

c = Complex.from_generators(4, 2, [])
for s in steps:
    c = add_simplex(c, simplex(s))
    h1 = cohomology(c, 1, F2).free_rank
    hats = find_Mhat_copies(c, 1, 2)
    print(f"after {s}: dim H^1 = {h1}, flower copies = {[m.key() for m in hats]}")
    print("   minimal bad support:", minimal_bad_support(c, 1))

# the same growth as a birth-time process
events = list(zip((0.1, 0.2, 0.3, 0.5, 0.7), steps))
trace = ProcessTrace.from_events(4, 2, events)
print("connected on:", connectedness_intervals(trace, 1))
print("hitting report:", hitting_time(trace, 1).to_dict())
