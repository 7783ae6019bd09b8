"""Encoders, Bayes decision arms and the exact information report."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import UsageError
from ..prob_core import (
    Alphabet,
    Channel,
    JointDistribution,
    marginalize,
    mutual_information,
    mutual_information_by_value,
    push_through_channel,
)

Z = "z"


@dataclass(frozen=True, eq=False)
class Encoder:
    """Stochastic representation ``q(z | x)``."""

    channel: Channel

    def __post_init__(self):
        if self.channel.output.name != Z:
            raise UsageError(f"encoder output axis must be named {Z!r}")

    @property
    def z_alphabet(self) -> Alphabet:
        return self.channel.output

    @property
    def table(self) -> np.ndarray:
        return self.channel.rows

    @classmethod
    def from_table(cls, x_alphabet: Alphabet, table) -> "Encoder":
        table = np.asarray(table, dtype=float)
        return cls(Channel(x_alphabet, Alphabet(Z, table.shape[1]), table))

    @classmethod
    def identity(cls, x_alphabet: Alphabet) -> "Encoder":
        return cls.from_table(x_alphabet, np.eye(x_alphabet.size))

    @classmethod
    def constant(cls, x_alphabet: Alphabet, z_size: int = 1, symbol: int = 0) -> "Encoder":
        return cls(Channel.constant(x_alphabet, Alphabet(Z, z_size), symbol))

    @classmethod
    def deterministic(cls, x_alphabet: Alphabet, mapping, z_size: int) -> "Encoder":
        return cls(Channel.deterministic(x_alphabet, Alphabet(Z, z_size), mapping))

    def is_deterministic(self) -> bool:
        return bool(np.all((self.table == 0) | (self.table == 1)))


@dataclass(frozen=True)
class Predictor:
    """Deterministic decision ``yhat = decision[z]`` (label indices)."""

    decision: tuple

    def __post_init__(self):
        object.__setattr__(self, "decision", tuple(int(d) for d in self.decision))

    def as_channel(self, z_alphabet: Alphabet, y_alphabet: Alphabet, name="yhat") -> Channel:
        out = Alphabet(name, y_alphabet.size, y_alphabet.labels)
        return Channel.deterministic(z_alphabet, out, self.decision)


def bayes_decision(pyz: np.ndarray):
    """Argmax-label decision per z column (ties to the lowest label) and its 0-1 risk."""
    decision = np.argmax(pyz, axis=0)
    risk = 1.0 - float(pyz.max(axis=0).sum())
    return decision, min(max(risk, 0.0), 1.0)


def bayes_predictor(joint_yz: JointDistribution, label="y", rep=Z):
    """Minimum 0-1 risk deterministic predictor of ``label`` from ``rep``.

    Returns ``(Predictor, risk)`` with ``risk = 1 - sum_z max_y p(y, z)``.
    """
    pyz = marginalize(joint_yz, (label, rep)).mass
    decision, risk = bayes_decision(pyz)
    return Predictor(decision), risk


@dataclass(frozen=True)
class InformationReport:
    """Every audited quantity for one (joint, encoder) pair, in bits."""

    i_y_z: float
    i_z_s: float
    i_s_y: float
    i_y_yhat: float
    i_yhat_s: float
    per_site_i_y_z: dict
    per_site_i_y_x: dict
    risk: float
    prediction_rates: dict
    decision: tuple
    skipped_sites: tuple = field(default=())


def extend_with_encoder(joint: JointDistribution, encoder: Encoder) -> JointDistribution:
    """``p(y, s, x, z) = p(y, s, x) q(z | x)``."""
    if joint.alphabet("x").size != encoder.channel.input.size:
        raise UsageError(f"encoder expects |X| = {encoder.channel.input.size}, joint has {joint.alphabet('x').size}")
    return push_through_channel(joint, encoder.channel, axis="x", mode="append")


def prediction_rates(joint_ysz: JointDistribution, predictor: Predictor) -> dict:
    """``{site: {yhat label: p(yhat | s)}}`` over positive-mass sites."""
    psz = marginalize(joint_ysz, ("s", Z)).mass
    labels = joint_ysz.alphabet("y").labels
    sites = joint_ysz.alphabet("s").labels
    dec = np.asarray(predictor.decision)
    rates = {}
    for j, site in enumerate(sites):
        w = psz[j].sum()
        if w <= 0:
            continue
        per = np.zeros(len(labels))
        np.add.at(per, dec, psz[j] / w)
        rates[site] = {lab: float(per[k]) for k, lab in enumerate(labels)}
    return rates


def evaluate_encoder(joint: JointDistribution, encoder: Encoder, predictor: Predictor | None = None
                     ) -> InformationReport:
    """Exact report for ``encoder`` on ``p(y, s, x)``.

    The decision arm is the Bayes predictor on ``(y, z)`` unless one is given.
    """
    full = extend_with_encoder(joint, encoder)
    if predictor is None:
        predictor, risk = bayes_predictor(full)
    else:
        if len(predictor.decision) != encoder.z_alphabet.size:
            raise UsageError("predictor is not total over Z")
        pyz = marginalize(full, ("y", Z)).mass
        risk = 1.0 - float(pyz[np.asarray(predictor.decision), np.arange(pyz.shape[1])].sum())
    with_yhat = push_through_channel(
        full, predictor.as_channel(encoder.z_alphabet, joint.alphabet("y")), axis=Z, mode="append")
    per_site_z = mutual_information_by_value(full, "y", Z, "s")
    per_site_x = mutual_information_by_value(joint, "y", "x", "s")
    sites = joint.alphabet("s").labels
    return InformationReport(
        i_y_z=mutual_information(full, "y", Z),
        i_z_s=mutual_information(full, Z, "s"),
        i_s_y=mutual_information(joint, "s", "y"),
        i_y_yhat=mutual_information(with_yhat, "y", "yhat"),
        i_yhat_s=mutual_information(with_yhat, "yhat", "s"),
        per_site_i_y_z=per_site_z,
        per_site_i_y_x=per_site_x,
        risk=risk,
        prediction_rates=prediction_rates(full, predictor),
        decision=tuple(joint.alphabet("y").labels[d] for d in predictor.decision),
        skipped_sites=tuple(s for s in sites if s not in per_site_x),
    )


# ---------------------------------------------------------------------------
# vectorized scoring of many encoders at once

def batch_scores(pysx: np.ndarray, tables: np.ndarray):
    """I(y,z), I(z,s) and Bayes risk for a stack of encoder tables.

    ``tables`` has shape ``(m, |X|, |Z|)``.  Returns three length-``m`` arrays
    (unclamped; callers compare with tolerances).
    """
    pysz = np.einsum("ysx,mxz->mysz", pysx, tables)
    pyz = pysz.sum(axis=2)
    psz = pysz.sum(axis=1)
    py = pysx.sum(axis=(1, 2))
    ps = pysx.sum(axis=(0, 2))
    pz = pyz.sum(axis=1)

    def _ent(p, axes):
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(p > 0, -p * np.log2(p), 0.0).sum(axis=axes)

    h_y = float(_ent(py, 0))
    h_s = float(_ent(ps, 0))
    h_z = _ent(pz, 1)
    i_y_z = h_y + h_z - _ent(pyz, (1, 2))
    i_z_s = h_s + h_z - _ent(psz, (1, 2))
    risk = 1.0 - pyz.max(axis=1).sum(axis=1)
    return i_y_z, i_z_s, risk
