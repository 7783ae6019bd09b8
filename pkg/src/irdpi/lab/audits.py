"""Numerical audits of the worst-site bound and the site-exclusive label argument."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import UsageError
from ..prob_core import JointDistribution, marginalize
from ..scenarios import per_site_information, site_exclusive_labels
from .evaluate import Z, Encoder, Predictor, bayes_predictor, evaluate_encoder, extend_with_encoder

HOLDS = "holds"
VIOLATED = "violated"
HYPOTHESIS_NOT_MET = "hypothesis-not-met"


@dataclass(frozen=True)
class Prop1Report:
    """Worst-site bound ``I(y,z) <= min_s I(y,x|s)`` for an invariant encoder.

    ``identity_deviation`` is ``max_s |I(y,z|s) - I(y,z)|``: zero whenever the
    per-site information equals the pooled information, which the bound's
    argument relies on.
    """

    lhs: float
    rhs: float
    slack: float
    minimum_site: str
    hypothesis_i_s_y: float
    hypothesis_i_z_s: float
    hypothesis_satisfied: bool
    identity_deviation: float
    per_site_i_y_z: dict
    verdict: str


def check_prop1(joint: JointDistribution, encoder: Encoder, hypothesis_tolerance: float = 1e-9,
                slack_tolerance: float = 1e-7) -> Prop1Report:
    rep = evaluate_encoder(joint, encoder)
    profile = per_site_information(joint)
    slack = profile.minimum_value - rep.i_y_z
    ok = rep.i_s_y <= hypothesis_tolerance and rep.i_z_s <= hypothesis_tolerance
    deviation = max(abs(v - rep.i_y_z) for v in rep.per_site_i_y_z.values())
    if not ok:
        verdict = HYPOTHESIS_NOT_MET
    elif slack < -slack_tolerance:
        verdict = VIOLATED
    else:
        verdict = HOLDS
    return Prop1Report(
        lhs=rep.i_y_z,
        rhs=profile.minimum_value,
        slack=slack,
        minimum_site=profile.minimum_site,
        hypothesis_i_s_y=rep.i_s_y,
        hypothesis_i_z_s=rep.i_z_s,
        hypothesis_satisfied=ok,
        identity_deviation=deviation,
        per_site_i_y_z=rep.per_site_i_y_z,
        verdict=verdict,
    )


@dataclass(frozen=True)
class Prop2Report:
    """How a predictor treats a label that only occurs at one site."""

    exclusive_label: str
    home_site: str
    recall_at_home: float
    false_positive_rate_elsewhere: float
    rate_gap: float
    rates_by_site: dict
    i_z_s: float
    decision: tuple


def check_prop2(joint: JointDistribution, encoder: Encoder, exclusive_label, home_site,
                predictor: Predictor | None = None) -> Prop2Report:
    """Recall of ``exclusive_label`` at its home site versus its prediction rate elsewhere.

    Every prediction of the label away from ``home_site`` is an error, so an
    invariant encoder (equal rates at every site) trades recall for false
    positives one for one in rate.
    """
    ys, ss = joint.alphabet("y"), joint.alphabet("s")
    yi, si = ys.index(exclusive_label), ss.index(home_site)
    label, home = ys.labels[yi], ss.labels[si]
    if site_exclusive_labels(joint).get(label) != (home,):
        raise UsageError(f"label {label!r} is not observed exclusively at site {home!r}")
    full = extend_with_encoder(joint, encoder)
    if predictor is None:
        predictor, _ = bayes_predictor(full)
    rep = evaluate_encoder(joint, encoder, predictor)
    hit = (np.asarray(predictor.decision) == yi).astype(float)

    pysz = marginalize(full, ("y", "s", Z)).mass
    recall = float(pysz[yi, si] @ hit / pysz[yi, si].sum())
    psz = pysz.sum(axis=0)
    away = np.delete(psz, si, axis=0)
    fp = float(away.sum(axis=0) @ hit / away.sum()) if away.sum() > 0 else 0.0
    rates = {s: r[label] for s, r in rep.prediction_rates.items()}
    gap = max(rates.values()) - min(rates.values())
    return Prop2Report(
        exclusive_label=label,
        home_site=home,
        recall_at_home=recall,
        false_positive_rate_elsewhere=fp,
        rate_gap=float(gap),
        rates_by_site=rates,
        i_z_s=rep.i_z_s,
        decision=rep.decision,
    )
