"""Canonical-path congestion and its path-free lower bound.

phi(G) maxes the length-weighted traffic over edges for a chosen family of
paths; whatever the family, it is at least 2 (mean squared hop distance) /
(average weighted degree).  The exclusion quarter-mixing time is printed
alongside phi ln(n) for qualitative comparison only.
"""

import math

import excl
from excl import bounds

for name, g in (("complete(4)", excl.complete_graph(4)),
                ("path(3)", excl.path_graph(3)),
                ("cycle(8)", excl.cycle_graph(8)),
                ("torus(2,3)", excl.torus_graph(2, 3)),
                ("er_giant(30,2)", excl.erdos_renyi_giant(30, 2.0, seed=4))):
    fam = bounds.default_paths(g)
    val = bounds.phi(g, fam)
    low = bounds.phi_lower_bound(g)
    worst_random = min(bounds.phi(g, bounds.random_shortest_paths(g, seed=s))
                       for s in range(20))
    print(f"{name:15s} phi={val:7.3f}  lower bound={low:7.3f}  "
          f"best of 20 random families={worst_random:7.3f}")

# report-only context: phi ln n next to the exact exclusion mixing time
g = excl.cycle_graph(8)
phi_val = bounds.phi(g, bounds.default_paths(g))
mix = excl.mixing_time(excl.build_generator(g, "ex_k", 4), 0.25)
print(f"\nC8, k=4: phi ln n = {phi_val * math.log(g.n):.3f}  "
      f"vs exact EX quarter-mixing {mix:.3f} (no constant asserted)")
