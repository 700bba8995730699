"""
Two-sided alternative: GROW against REGROW on [0, 1], mu0 = 0.5, mu1 = 0.75.

GROW maximises the worst-case e-power and is pinned down by the extreme law on
{a, b}. REGROW maximises the worst-case shortfall against the best e-variable
for each alternative; it has two worst cases of equal value.
"""
from evopt.core_types import MeanProblem, SupportInterval
from evopt.growth import gro_two_point
from evopt.optima import solve
from evopt.oracle import beta_profile

unit = SupportInterval(0.0, 1.0)
problem = MeanProblem(unit, "two-sided", 0.5, 0.75)

for crit in ("grow", "regrow"):
    res = solve(problem, crit)
    print(f"{crit:>6}: alpha* = {res.alpha_star:.10f}  value = {res.objective_value:+.8f}")
    for q in res.worst_cases:
        g = gro_two_point(q, problem.mu0, unit)
        print(f"        worst case {q.to_dict()}  (its GRO bet: {g.beta_star:.4f})")

# the REGROW parameter sits strictly between the GRO bets of its two worst cases
alpha = solve(problem, "regrow").alpha_star
betas, prof = beta_profile(problem, alpha)
inner = [i for i in range(1, len(prof) - 1) if prof[i] <= prof[i - 1] and prof[i] <= prof[i + 1]]
print("\nbeta profile at alpha*: local minima at", [round(float(betas[i]), 4) for i in inner], "and at the right end",
      round(float(betas[-1]), 4))
print(f"values {prof[inner[0]]:.3e} and {prof[-1]:.3e}")
