"""
One-sided and agnostic alternatives, and how the optimal bets move with mu1.

As mu1 drops to mu0 the GROW bet vanishes while the one-sided REGROW bet does
not. With no information about the direction, GROW is the trivial e-variable and
REGROW still bets, on the side of the longer half of the support.
"""
import numpy as np

from evopt.core_types import SupportInterval
from evopt.cli import curve_rows
from evopt.optima import agnostic_grow, agnostic_regrow, regrow_one_sided

unit = SupportInterval(0.0, 1.0)
print("   mu1   alpha_GW  alpha_RGW(2s)  alpha_RGW(1s)")
for row in curve_rows(unit, 0.5, 8, 1e-3):
    print("  ".join(f"{v:9.5f}" for v in row))

print(f"\none-sided REGROW at mu1 = mu0: {regrow_one_sided(unit, 0.5, 0.5).alpha_star}")

for mu0 in np.linspace(0.1, 0.9, 5):
    g, r = agnostic_grow(unit, mu0), agnostic_regrow(unit, mu0)
    print(f"agnostic mu0={mu0:.1f}: GROW {g.alpha_star:+.3f}   REGROW {r.alpha_star:+.4f}"
          f"   worst cases at {[q.x1 for q in r.worst_cases]}")
