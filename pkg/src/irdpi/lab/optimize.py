"""Projected-gradient optimization of stochastic encoders under a site-information penalty.

Two objectives over row-stochastic tables ``Q[x, z] = q(z | x)``:

* ``info``: maximize ``I(y,z) - lam * I(z,s)``
* ``risk``: minimize ``risk + lam * I(z,s)`` (0-1 Bayes risk, subgradient)

Internally both are posed as maximization of ``F``; ``risk`` mode reports
``-F``.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from ..errors import UsageError
from ..prob_core import JointDistribution, marginalize
from .enumerate import ENUMERATION_CAP, TIE_ATOL, iter_map_chunks, select_best
from .evaluate import Encoder, InformationReport, evaluate_encoder

MODES = ("info", "risk")
_LOG_FLOOR = 1e-300
_ARMIJO = 1e-4
_MIN_STEP = 1e-16
_MAX_STEP = 1e6


def project_rows_to_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection of every row of ``v`` onto the probability simplex."""
    v = np.atleast_2d(np.asarray(v, dtype=float))
    n = v.shape[1]
    u = -np.sort(-v, axis=1)
    css = np.cumsum(u, axis=1) - 1.0
    k = np.arange(1, n + 1)
    cond = u - css / k > 0
    rho = n - 1 - np.argmax(cond[:, ::-1], axis=1)
    theta = css[np.arange(v.shape[0]), rho] / (rho + 1)
    return np.maximum(v - theta[:, None], 0.0)


def _negent(p):
    with np.errstate(divide="ignore", invalid="ignore"):
        return float(np.where(p > 0, p * np.log2(p), 0.0).sum())


class EncoderObjective:
    """Penalized objective and its (sub)gradient for a fixed ``p(y, s, x)``.

    Label and site marginals are held fixed, so the mutual information terms
    extend smoothly off the simplex and central differences are meaningful.
    """

    def __init__(self, joint: JointDistribution, lam: float, mode: str = "info"):
        if mode not in MODES:
            raise UsageError(f"unknown mode {mode!r}; use one of {MODES}")
        if lam < 0:
            raise UsageError("lambda must be nonnegative")
        pysx = marginalize(joint, ("y", "s", "x")).mass
        self.pyx = pysx.sum(axis=1)
        self.psx = pysx.sum(axis=0)
        self.px = self.pyx.sum(axis=0)
        self.negent_y = _negent(self.pyx.sum(axis=1))
        self.negent_s = _negent(self.psx.sum(axis=1))
        self.lam = float(lam)
        self.mode = mode

    def parts(self, q):
        pyz = self.pyx @ q
        psz = self.psx @ q
        pz = self.px @ q
        negent_z = _negent(pz)
        i_yz = _negent(pyz) - self.negent_y - negent_z
        i_zs = _negent(psz) - self.negent_s - negent_z
        risk = 1.0 - float(pyz.max(axis=0).sum())
        return i_yz, i_zs, risk

    def value(self, q) -> float:
        """``F`` (to be maximized)."""
        i_yz, i_zs, risk = self.parts(q)
        if self.mode == "info":
            return i_yz - self.lam * i_zs
        return -(risk + self.lam * i_zs)

    def batch_values(self, tables):
        """``F`` and ``I(z,s)`` for a stack of tables of shape ``(m, |X|, |Z|)``."""
        def negent(p, axes):
            with np.errstate(divide="ignore", invalid="ignore"):
                return np.where(p > 0, p * np.log2(p), 0.0).sum(axis=axes)

        pyz = np.einsum("yx,mxz->myz", self.pyx, tables)
        psz = np.einsum("sx,mxz->msz", self.psx, tables)
        negent_z = negent(pyz.sum(axis=1), 1)
        i_yz = negent(pyz, (1, 2)) - self.negent_y - negent_z
        i_zs = negent(psz, (1, 2)) - self.negent_s - negent_z
        if self.mode == "info":
            return i_yz - self.lam * i_zs, i_zs
        risk = 1.0 - pyz.max(axis=1).sum(axis=1)
        return -(risk + self.lam * i_zs), i_zs

    def _mi_grad(self, pax, q):
        paz = pax @ q
        pz = self.px @ q
        return pax.T @ np.log2(np.maximum(paz, _LOG_FLOOR)) - self.px[:, None] * np.log2(np.maximum(pz, _LOG_FLOOR))

    def gradient(self, q) -> np.ndarray:
        pen = self._mi_grad(self.psx, q) if self.lam else 0.0
        if self.mode == "info":
            return self._mi_grad(self.pyx, q) - self.lam * pen
        pyz = self.pyx @ q
        best = np.argmax(pyz, axis=0)
        # d(-risk)/dQ[x, z] = p(y*(z), x)
        return self.pyx[best, :].T - self.lam * pen

    def reported(self, report: InformationReport) -> float:
        """Signed objective as documented for the mode, from an exact report."""
        if self.mode == "info":
            return report.i_y_z - self.lam * report.i_z_s
        return report.risk + self.lam * report.i_z_s


@dataclass(frozen=True)
class OptimizerOptions:
    z_size: int = None
    restarts: int = 16
    max_iters: int = 10000
    step_rule: str = "backtracking"
    tolerance: float = 1e-10
    seed: object = 0
    warm_start: bool = True


@dataclass(frozen=True)
class TradeoffPoint:
    lam: float
    report: InformationReport
    objective_value: float
    converged: bool
    restarts_used: int
    encoder_table: tuple = field(default=(), repr=False)


def ascend(objective: EncoderObjective, q: np.ndarray, max_iters: int, tolerance: float):
    """Projected gradient ascent with Armijo backtracking.  Returns ``(q, F, converged, iters)``."""
    val = objective.value(q)
    step = 1.0
    for it in range(1, max_iters + 1):
        g = objective.gradient(q)
        while True:
            qn = project_rows_to_simplex(q + step * g)
            vn = objective.value(qn)
            if vn >= val + _ARMIJO * float(np.sum(g * (qn - q))):
                break
            step *= 0.5
            if step < _MIN_STEP:
                return q, val, True, it
        done = abs(vn - val) < tolerance
        q, val = qn, vn
        if done:
            return q, val, True, it
        step = min(step * 2.0, _MAX_STEP)
    return q, val, False, max_iters


def best_deterministic_start(objective: EncoderObjective, z_size: int):
    """Deterministic table maximizing ``F``, or ``None`` past the enumeration cap."""
    n_x = objective.px.size
    if z_size ** n_x > ENUMERATION_CAP:
        return None
    vals, izs, tabs = [], [], []
    for _, tables in iter_map_chunks(n_x, z_size):
        v, i = objective.batch_values(tables)
        vals.append(v)
        izs.append(i)
        tabs.append(tables)
    k = select_best(np.concatenate(vals), np.concatenate(izs))
    return np.concatenate(tabs)[k]


def lagrangian_optimize(joint: JointDistribution, lam: float, mode: str = "info",
                        opts: OptimizerOptions | None = None) -> TradeoffPoint:
    """Multi-restart projected gradient on the penalized objective at one ``lam``.

    Restart 0 is the best deterministic encoder (when enumerable); the rest
    are random row-stochastic tables drawn from ``opts.seed``.  The best
    restart wins, ties to the lower restart index.
    """
    opts = opts or OptimizerOptions()
    if opts.step_rule != "backtracking":
        raise UsageError(f"unsupported step rule {opts.step_rule!r}")
    x = joint.alphabet("x")
    z_size = x.size if opts.z_size is None else int(opts.z_size)
    if z_size < 1:
        raise UsageError("z_size must be >= 1")
    objective = EncoderObjective(joint, lam, mode)
    rng = np.random.default_rng(opts.seed)

    starts = []
    if opts.warm_start:
        warm = best_deterministic_start(objective, z_size)
        if warm is not None:
            starts.append(warm)
    while len(starts) < max(opts.restarts, 1):
        starts.append(rng.dirichlet(np.ones(z_size), size=x.size))

    best = None
    for q0 in starts:
        q, val, converged, _ = ascend(objective, q0, opts.max_iters, opts.tolerance)
        if best is None or val > best[1] + TIE_ATOL:
            best = (q, val, converged)
    q, _, converged = best
    encoder = Encoder.from_table(x, q)
    report = evaluate_encoder(joint, encoder)
    return TradeoffPoint(
        lam=float(lam),
        report=report,
        objective_value=objective.reported(report),
        converged=converged,
        restarts_used=len(starts),
        encoder_table=tuple(map(tuple, encoder.table.tolist())),
    )


def default_lambda_grid(lambda_min=1e-3, lambda_max=1e3, points=33):
    """``0`` followed by ``points`` log-spaced values in ``[lambda_min, lambda_max]``."""
    if points < 1:
        return [0.0]
    return [0.0] + np.logspace(np.log10(lambda_min), np.log10(lambda_max), points).tolist()


@dataclass(frozen=True)
class Frontier:
    points: tuple
    pareto: tuple
    mode: str


def pareto_filter(points, atol=TIE_ATOL):
    """Points not dominated in (higher ``i_y_z``, lower ``i_z_s``), ordered by decreasing ``i_z_s``.

    Near-duplicates keep the one reached at the smallest lambda.
    """
    keep = []
    for p in points:
        a, b = p.report.i_y_z, p.report.i_z_s
        dominated = False
        for q in points:
            c, d = q.report.i_y_z, q.report.i_z_s
            if c >= a - atol and d <= b + atol and (c > a + atol or d < b - atol):
                dominated = True
                break
        if dominated:
            continue
        if any(abs(k.report.i_y_z - a) <= atol and abs(k.report.i_z_s - b) <= atol for k in keep):
            continue
        keep.append(p)
    return tuple(sorted(keep, key=lambda p: (-p.report.i_z_s, -p.report.i_y_z, p.lam)))


def sweep_frontier(joint: JointDistribution, lambda_grid=None, mode: str = "info",
                   opts: OptimizerOptions | None = None) -> Frontier:
    """One independently restarted optimization per lambda, plus the Pareto subset."""
    grid = default_lambda_grid() if lambda_grid is None else [float(l) for l in lambda_grid]
    if not grid or any(l < 0 for l in grid) or any(b < a for a, b in zip(grid, grid[1:])):
        raise UsageError("lambda grid must be nonempty, nonnegative and ascending")
    opts = opts or OptimizerOptions()
    base = opts.seed if isinstance(opts.seed, (list, tuple)) else [opts.seed]
    points = tuple(
        lagrangian_optimize(joint, lam, mode, replace(opts, seed=list(base) + [k]))
        for k, lam in enumerate(grid)
    )
    return Frontier(points=points, pareto=pareto_filter(points), mode=mode)
