"""The discrete ink chain: fair +-delta steps, fill probability, contraction.

From total ink r the next depinking moves by delta(r) = ceil(min(r, m-r)/3)
with a fair coin; absorption at m ("fill") has probability exactly 1/m, and
conditioning on fill contracts a square-root statistic by 71/72 per step.
"""

import math

import excl

m = 30
print("step kernel examples (m = 30):")
for a in (1, 5, 15, 29):
    print(f"  from {a:2d}: {dict(excl.step_kernel(a, m))}")
print("fill-conditioned kernel from 5:", dict(excl.conditioned_kernel(5, m)))

print("\nfill probability: closed form vs absorption linear solve")
for mm in (2, 10, 100):
    print(f"  m={mm:4d}: {excl.fill_probability(mm):.6f} "
          f"vs {excl.fill_probability_linear(mm):.6f}")

frac = excl.simulate_fill_fraction(20, 10**5, seed=8)
print("simulated fill fraction at m=20:", frac, "(expect 0.05)")

path = excl.simulate_ink(30, seed=2)
print("\none simulated path:", path.path, "-> absorbed at", path.absorbed_at)

decay, z_mean = excl.conditioned_decay_profile(m, 60)
print("\nfill-conditioned decay vs the sqrt(m) (71/72)^l envelope:")
for ell in (0, 10, 20, 40, 60):
    env = math.sqrt(m) * (71 / 72) ** ell
    print(f"  l={ell:2d}: E[1 - ink/m | fill] = {decay[ell]:.6f}  envelope {env:.6f}"
          f"  z-mean {z_mean[ell]:.6f}")
