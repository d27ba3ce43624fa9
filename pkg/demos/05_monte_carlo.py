"""Monte-Carlo frequency tables: how often is the right model selected?

Each trial draws fresh parameters, samples a graph, and runs the configured
selection; the table counts the winners. Same seed, same table, always.
"""

import netcv

scenario = netcv.Scenario("sbm-3", 300)
method = netcv.MethodConfig(
    pair="sbm-vs-dcbm",
    cv=netcv.CvConfig(scheme="vfold", v=10),
    pen=netcv.PenaltyConfig(),
)

table = netcv.monte_carlo(scenario, method, reps=10, seed=42)
print(netcv.frequency_csv(table, scenario, method.name))

correct = sum(c for m, c in table.counts.items() if m.startswith("sbm"))
print(f"correct-family frequency: {correct / table.reps:.2f}")

again = netcv.monte_carlo(scenario, method, reps=10, seed=42)
print("reproducible:", table == again)
