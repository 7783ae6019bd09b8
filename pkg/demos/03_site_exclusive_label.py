"""A label that only occurs at one site.

Label 2 is only ever seen at site B.  An encoder that is exactly invariant
must predict label 2 at the same rate at both sites, and at site A every
such prediction is wrong.

Run: python demos/03_site_exclusive_label.py
"""
import numpy as np

from irdpi import build_joint, site_exclusive_labels, site_exclusive_scenario
from irdpi.lab import Encoder, Predictor, check_prop2, enumerate_deterministic_optimum

joint = build_joint(site_exclusive_scenario())
print("sites where each label occurs:", site_exclusive_labels(joint))
x = joint.alphabet("x")

ident = check_prop2(joint, Encoder.identity(x), "2", "B")
print(f"\nidentity encoder: recall at B = {ident.recall_at_home}, false positives at A = "
      f"{ident.false_positive_rate_elsewhere}, I(z, s) = {ident.i_z_s:.4f} bits")

_, best = enumerate_deterministic_optimum(joint, 3, 1e-9)
print("best exactly-invariant deterministic encoder keeps I(y; z) =", best.i_y_z)

# Stochastic invariant encoders exist: q(z | x=2) must be the mean of q(z | x=0) and q(z | x=1).
rng = np.random.default_rng(0)
q = rng.dirichlet(np.ones(3), size=2)
enc = Encoder.from_table(x, np.vstack([q, q.mean(axis=0)]))
# Force a predictor that sometimes says "2".
rep = check_prop2(joint, enc, "2", "B", predictor=Predictor([0, 1, 2]))
print(f"\ninvariant encoder, I(z, s) = {rep.i_z_s:.1e}")
print("rate of predicting 2 by site:", {k: round(v, 4) for k, v in rep.rates_by_site.items()})
print(f"recall at B = {rep.recall_at_home:.4f}; every prediction of 2 at A is a false positive "
      f"(rate {rep.false_positive_rate_elsewhere:.4f})")
