"""Exact finite-state oracles: transition rows, TV curves, mixing times.

The two-vertex and complete graphs have closed-form transition laws, which
makes them good sanity anchors; after that we look at worst-case TV decay
for the exclusion process and the classical eps-doubling bound.
"""

import math

import numpy as np

import excl

# Closed form on two vertices: p_t(0,0) = 1/2 + exp(-2t)/2
k2 = excl.complete_graph(2)
rw2 = excl.build_generator(k2, "rw")
t = math.log(2) / 2
print("K2 p_t(0,0):", excl.transition_distribution(rw2, 0, t).prob(0), "(expect 0.75)")
print("K2 quarter mixing:", excl.mixing_time(rw2, 0.25), "= ln2/2 =", t)

k4 = excl.complete_graph(4)
print("K4 quarter mixing:", excl.mixing_time(excl.build_generator(k4, "rw"), 0.25),
      "= ln3/4 =", math.log(3) / 4)

# Worst-case TV decay for two exclusion particles on a 6-cycle
c6 = excl.cycle_graph(6)
ex2 = excl.build_generator(c6, "ex_k", 2)
print("\nEX(2, C6) worst-case TV:")
for tt in (0.0, 0.5, 1.0, 2.0, 4.0, 8.0):
    print(f"  t={tt:4.1f}  d(t)={excl.worst_case_distance(ex2, tt):.6f}")

# the eps-doubling bound: fT(eps) <= ceil(log2(1/eps)) fT(1/4)
base = excl.mixing_time(ex2, 0.25)
print("\neps-doubling bound on EX(2, C6):")
for k in range(1, 6):
    print(f"  fT(2^-{k}) = {excl.mixing_time(ex2, 2.0**-k):8.4f}"
          f"  <=  {k} * fT(1/4) = {k * base:8.4f}")

# occupied/empty duality: EX(k) and EX(n-k) have identical TV curves
ex4 = excl.build_generator(c6, "ex_k", 4)
gap = max(abs(excl.worst_case_distance(ex2, tt) - excl.worst_case_distance(ex4, tt))
          for tt in np.linspace(0.1, 5, 25))
print("\nmax |EX(2) - EX(4)| TV gap on C6:", gap)

# negative correlation of exclusion occupancies, exactly
violation, pair = excl.negative_correlation_report(c6, 3, (0, 1, 2), 0.5)
print("max occupancy covariance (should be <= 0):", violation, "at", pair)
