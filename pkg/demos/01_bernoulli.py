"""
Bernoulli data: the three e-variables worth knowing about.

For X in {0, 1} and null mean mu0, every e-variable is Z_eps = (eps/mu0, (1-eps)/(1-mu0))
on the outcomes (1, 0). Its e-power under Ber(mu) is a straight line in mu that
touches the GRO curve kl(mu, mu0) at mu = eps.
"""
import numpy as np

from evopt.optima import bernoulli_evar, bernoulli_regrow_agnostic, bernoulli_regrow_one_sided
from evopt.cli import bernoulli_rows

mu0 = 0.3
eps1 = bernoulli_regrow_one_sided(mu0)
half = bernoulli_regrow_agnostic()
print(f"mu0 = {mu0}")
print(f"one-sided REGROW   eps = {eps1:.6f}   Z = {np.round(bernoulli_evar(eps1, mu0), 4)}")
print(f"agnostic REGROW    eps = {half:.6f}   Z = {np.round(bernoulli_evar(half, mu0), 4)}")
print(f"trivial            eps = {mu0:.6f}   Z = {bernoulli_evar(mu0, mu0)}")

rows = bernoulli_rows(mu0, 11)
print("\n    mu     GRO    line@eps1  line@1/2  line@mu0")
for mu, gro, t1, th, t0 in rows:
    print(f"{mu:7.4f} {gro:8.4f} {t1:9.4f} {th:9.4f} {t0:9.4f}")

# the lines never rise above the GRO curve and touch it at their own eps
gap = min(abs(r[1] - r[2]) for r in rows if abs(r[0] - eps1) < 1e-12)
print(f"\ngap between GRO and the eps1 line at mu = eps1: {gap:.1e}")
