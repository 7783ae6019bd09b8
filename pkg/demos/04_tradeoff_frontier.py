"""Sweeping the site-information penalty.

For each lambda we maximize I(y; z) - lambda I(z, s) over stochastic
encoders and keep the Pareto-efficient operating points.

Run: python demos/04_tradeoff_frontier.py [OUT_DIR]
"""
import sys

from irdpi import build_joint, random_scenario, site_exclusive_scenario
from irdpi.lab import default_lambda_grid, sweep_frontier
from irdpi.reports import csv_text

worlds = {
    "site-exclusive label": build_joint(site_exclusive_scenario()),
    "random 3x3x4 world": build_joint(random_scenario(3, (3, 3, 4))),
}
grid = default_lambda_grid(1e-2, 1e2, 13)

for name, joint in worlds.items():
    frontier = sweep_frontier(joint, grid, mode="info")
    print(f"\n{name}: {len(frontier.pareto)} Pareto points of {len(frontier.points)}")
    print(f"{'lambda':>10} {'I(y;z)':>10} {'I(z;s)':>10} {'risk':>8}")
    for p in frontier.pareto:
        print(f"{p.lam:10.3g} {p.report.i_y_z:10.6f} {p.report.i_z_s:10.2e} {p.report.risk:8.4f}")
    if len(sys.argv) > 1:
        rows = [(p.lam, p.report.i_y_z, p.report.i_z_s, p.report.risk) for p in frontier.points]
        path = f"{sys.argv[1]}/{name.split()[0]}_frontier.csv"
        with open(path, "w") as fh:
            fh.write(csv_text(("lambda", "i_y_z_bits", "i_z_s_bits", "risk"), rows))
