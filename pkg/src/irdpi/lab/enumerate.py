"""Exhaustive search over deterministic encoders X -> Z."""
from __future__ import annotations

import itertools

import numpy as np

from ..errors import CapacityError
from ..prob_core import JointDistribution, marginalize
from .evaluate import Encoder, batch_scores, evaluate_encoder

#: largest number of deterministic maps we enumerate
ENUMERATION_CAP = 10**6
#: values closer than this are treated as ties
TIE_ATOL = 1e-12
_CHUNK = 4096


def _check_cap(n_x, z_size):
    count = z_size ** n_x
    if count > ENUMERATION_CAP:
        raise CapacityError(f"{z_size}^{n_x} = {count} deterministic maps exceeds the enumeration cap {ENUMERATION_CAP}")
    return count


def iter_map_chunks(n_x, z_size, chunk=_CHUNK):
    """Yield ``(maps, tables)`` in lexicographic map order, ``chunk`` maps at a time."""
    _check_cap(n_x, z_size)
    eye = np.eye(z_size)
    it = itertools.product(range(z_size), repeat=n_x)
    while True:
        block = list(itertools.islice(it, chunk))
        if not block:
            return
        maps = np.array(block, dtype=int).reshape(len(block), n_x)
        yield maps, eye[maps]


def score_deterministic_maps(joint: JointDistribution, z_size: int):
    """All ``z_size ** |X|`` maps with their ``(i_y_z, i_z_s, risk)`` arrays, lexicographic order."""
    pysx = marginalize(joint, ("y", "s", "x")).mass
    maps, iyz, izs, risk = [], [], [], []
    for m, tables in iter_map_chunks(pysx.shape[2], z_size):
        a, b, c = batch_scores(pysx, tables)
        maps.append(m)
        iyz.append(a)
        izs.append(b)
        risk.append(c)
    return (np.concatenate(maps), np.maximum(np.concatenate(iyz), 0.0),
            np.maximum(np.concatenate(izs), 0.0), np.concatenate(risk))


def select_best(primary, secondary, feasible=None):
    """Index maximizing ``primary``; near-ties go to lower ``secondary``, then lowest index."""
    primary = np.asarray(primary)
    idx = np.arange(primary.size) if feasible is None else np.flatnonzero(feasible)
    if idx.size == 0:
        return None
    best = primary[idx].max()
    idx = idx[primary[idx] >= best - TIE_ATOL]
    sec = np.asarray(secondary)[idx]
    idx = idx[sec <= sec.min() + TIE_ATOL]
    return int(idx[0])


def enumerate_deterministic_optimum(joint: JointDistribution, z_size: int | None = None,
                                    invariance_tolerance: float = 1e-9):
    """Best deterministic encoder for ``max I(y,z)`` subject to ``I(z,s) <= tolerance``.

    Returns ``(Encoder, InformationReport)``.  A constant map is always
    feasible, so there is always an answer.
    """
    x = joint.alphabet("x")
    z_size = x.size if z_size is None else int(z_size)
    maps, iyz, izs, _ = score_deterministic_maps(joint, z_size)
    k = select_best(iyz, izs, izs <= invariance_tolerance)
    assert k is not None, "constant maps are always invariant"
    encoder = Encoder.deterministic(x, maps[k], z_size)
    return encoder, evaluate_encoder(joint, encoder)
