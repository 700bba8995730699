"""
Cross-checking the closed forms with the brute-force grid oracle.

The oracle never looks at a formula. It takes the sup over a grid of alpha of
the min over a grid of two-point alternatives, and only at the end reports the
distance to the closed-form answer.
"""
import time

import numpy as np

from evopt.core_types import ProblemKind
from evopt.oracle import GridSpec, grid_grow, grid_regrow, random_instance

rng = np.random.default_rng(1)
spec = GridSpec(201, 201, 101, 51)
for kind in ProblemKind:
    p = random_instance(rng, kind)
    t0 = time.perf_counter()
    g = grid_grow(p, spec)
    r = grid_regrow(p, spec)
    mu1 = "-" if p.mu1 is None else f"{p.mu1:.3f}"
    print(f"{kind.value:>16} [{p.a:.2f}, {p.b:.2f}] mu0={p.mu0:.3f} mu1={mu1}")
    print(f"{'':>16} GROW   grid {g.alpha_hat:+.4f} vs {g.alpha_star:+.4f} ({g.alpha_gap_steps:.2f} steps)")
    print(f"{'':>16} REGROW grid {r.alpha_hat:+.4f} vs {r.alpha_star:+.4f} ({r.alpha_gap_steps:.2f} steps)"
          f"   {time.perf_counter() - t0:.1f}s")
