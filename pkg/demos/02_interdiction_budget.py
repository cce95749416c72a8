"""How much budget does it take to shut a computation flow down?"""

# %%
# The fig6 network: one unit of flow loops s -> u -> v -> s -> u -> t and is
# processed at v.  Link (u, t) is the cheapest cut (1.5) but is not saturated,
# so it has no shadow price; link (s, u) is saturated and carries the flow
# twice.
import numpy as np

from compnet.interdiction import InterdictionProblem, budget_sweep, sweep_to_csv
from compnet.testkit.fixtures import fig6_partial_curve, fixture

fx = fixture("fig6")
partial = InterdictionProblem(fx.network, fx.source, fx.target, 0.0, "partial")
binary = InterdictionProblem(fx.network, fx.source, fx.target, 0.0)
grid = np.arange(0.0, 1.76, 0.25)

# %%
# Removing a fraction of (s, u) pays off at rate 1/2 until the budget reaches
# 1; from there on it is better to spend everything on (u, t).  The greedy
# heuristic keeps following the shadow price and ends up above the optimum.
rows = {(r.budget, r.method): r.residual_flow
        for r in budget_sweep(partial, grid, ["exact", "greedy"])}
binary_rows = {r.budget: r.residual_flow for r in budget_sweep(binary, grid)}
print(" B     closed form  partial opt  partial greedy  binary opt")
for b in grid:
    print(f"{b:4.2f}  {fig6_partial_curve(b):11.3f}  {rows[b, 'exact']:11.3f}  "
          f"{rows[b, 'greedy']:14.3f}  {binary_rows[b]:10.3f}")

# %%
# Sweeps export straight to CSV for plotting elsewhere.
abilene = fixture("abilene_joint")
p = InterdictionProblem(abilene.network, abilene.source, abilene.target, 0.0)
print(sweep_to_csv(budget_sweep(p, [0, 0.5, 1, 1.5, 2, 2.5], ["exact", "greedy"])))
