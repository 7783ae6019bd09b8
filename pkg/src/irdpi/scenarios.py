"""Synthetic multi-site "scanner" worlds.

A :class:`Scenario` fixes a label/site coupling ``p(y, s)`` and one scanner
channel ``p(x | y, s)`` per site; :func:`build_joint` materializes the exact
tensor ``p(y, s, x)`` on axes named ``"y"``, ``"s"``, ``"x"``.

Scenarios keep their numbers exactly as given (tuples of floats) so that a
text round trip is lossless; normalization happens in :func:`build_joint`.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import UsageError, ValidationError
from .prob_core import (
    NORMALIZATION_ATOL,
    Alphabet,
    Channel,
    JointDistribution,
    conditional_mutual_information,
    marginalize,
    mutual_information,
    mutual_information_by_value,
)

Y, S, X = "y", "s", "x"
SCANNER_KINDS = ("bsc", "erasure", "explicit")


def _prob_tuple(values, what):
    values = tuple(float(v) for v in values)
    if any(v < 0 or v != v for v in values):
        raise ValidationError(f"{what}: entries must be nonnegative")
    if abs(sum(values) - 1.0) > NORMALIZATION_ATOL:
        raise ValidationError(f"{what}: sums to {sum(values)!r}, not 1")
    return values


@dataclass(frozen=True)
class ScannerModel:
    """Observation channel ``p(x | y, s=site)``.

    ``kind`` is ``"bsc"`` (``param`` = crossover), ``"erasure"`` (``param`` =
    erasure probability, erased symbol is the last x) or ``"explicit"``
    (``rows`` = row-major table with ``x_size`` columns, one row per label).
    """

    site: str
    kind: str
    param: float = None
    rows: tuple = None
    x_size: int = None

    def __post_init__(self):
        object.__setattr__(self, "site", str(self.site))
        if self.kind not in SCANNER_KINDS:
            raise ValidationError(f"scanner {self.site!r}: unknown kind {self.kind!r}")
        if self.kind == "explicit":
            if self.rows is None or self.x_size is None:
                raise ValidationError(f"scanner {self.site!r}: explicit kind needs rows and x_size")
            rows = tuple(tuple(float(v) for v in r) for r in self.rows)
            for i, r in enumerate(rows):
                if len(r) != self.x_size:
                    raise ValidationError(f"scanner {self.site!r}: row {i} has {len(r)} entries, x_size is {self.x_size}")
                _prob_tuple(r, f"scanner {self.site!r} row {i}")
            object.__setattr__(self, "rows", rows)
            object.__setattr__(self, "x_size", int(self.x_size))
        else:
            p = float(self.param) if self.param is not None else float("nan")
            if not 0.0 <= p <= 1.0:
                raise ValidationError(f"scanner {self.site!r}: {self.kind} parameter {self.param!r} not in [0, 1]")
            object.__setattr__(self, "param", p)

    @classmethod
    def bsc(cls, site, epsilon):
        return cls(site, "bsc", param=epsilon)

    @classmethod
    def erasure(cls, site, delta):
        return cls(site, "erasure", param=delta)

    @classmethod
    def explicit(cls, site, rows):
        rows = np.asarray(rows, dtype=float)
        return cls(site, "explicit", rows=tuple(map(tuple, rows.tolist())), x_size=rows.shape[1])

    @classmethod
    def identity(cls, site, n):
        return cls.explicit(site, np.eye(n))

    def required_x_size(self, n_labels: int) -> int:
        if self.kind == "bsc":
            return 2
        if self.kind == "erasure":
            return n_labels + 1
        return self.x_size

    def table(self, n_labels: int, n_obs: int) -> np.ndarray:
        """Dense ``(n_labels, n_obs)`` table of p(x | y)."""
        if self.kind == "bsc":
            if n_labels != 2:
                raise ValidationError(f"scanner {self.site!r}: bsc needs |Y| = 2, got {n_labels}")
            e = self.param
            t = np.zeros((2, n_obs))
            t[:, :2] = [[1 - e, e], [e, 1 - e]]
            return t
        if self.kind == "erasure":
            if n_obs != n_labels + 1:
                raise ValidationError(f"scanner {self.site!r}: erasure needs |X| = |Y| + 1")
            t = np.zeros((n_labels, n_obs))
            t[np.arange(n_labels), np.arange(n_labels)] = 1 - self.param
            t[:, -1] = self.param
            return t
        t = np.array(self.rows)
        if t.shape != (n_labels, n_obs):
            raise ValidationError(f"scanner {self.site!r}: table shape {t.shape}, expected {(n_labels, n_obs)}")
        return t


@dataclass(frozen=True)
class Scenario:
    """Label/site coupling plus one scanner per site.

    Give either ``label_prior`` and ``site_prior`` (independent coupling) or
    ``joint_ys``, a row-major ``p(y, s)`` table.  Zero cells of ``joint_ys``
    declare site-exclusive labels.
    """

    label_alphabet: Alphabet
    site_alphabet: Alphabet
    observation_alphabet: Alphabet
    scanners: tuple
    label_prior: tuple = None
    site_prior: tuple = None
    joint_ys: tuple = None

    def __post_init__(self):
        ny, ns = self.label_alphabet.size, self.site_alphabet.size
        if self.joint_ys is not None:
            if self.label_prior is not None or self.site_prior is not None:
                raise ValidationError("give either joint_ys or the two priors, not both")
            j = _prob_tuple(self.joint_ys, "joint_ys")
            if len(j) != ny * ns:
                raise ValidationError(f"joint_ys has {len(j)} entries, expected {ny * ns}")
            object.__setattr__(self, "joint_ys", j)
        else:
            if self.label_prior is None or self.site_prior is None:
                raise ValidationError("independent coupling needs label_prior and site_prior")
            lp = _prob_tuple(self.label_prior, "label prior")
            sp = _prob_tuple(self.site_prior, "site prior")
            if len(lp) != ny or len(sp) != ns:
                raise ValidationError("prior lengths do not match the alphabets")
            object.__setattr__(self, "label_prior", lp)
            object.__setattr__(self, "site_prior", sp)
        scanners = tuple(self.scanners)
        seen = set()
        for sc in scanners:
            self.site_alphabet.index(sc.site)
            if sc.site in seen:
                raise ValidationError(f"more than one scanner for site {sc.site!r}")
            seen.add(sc.site)
        object.__setattr__(self, "scanners", scanners)

    @property
    def independent(self) -> bool:
        return self.joint_ys is None

    def scanner(self, site):
        for sc in self.scanners:
            if sc.site == site:
                return sc
        return None

    def coupling(self) -> np.ndarray:
        """Unnormalized-tolerant ``p(y, s)`` array exactly as declared."""
        if self.joint_ys is not None:
            return np.array(self.joint_ys).reshape(self.label_alphabet.size, self.site_alphabet.size)
        return np.outer(self.label_prior, self.site_prior)


def make_scenario(scanners, *, label_prior=None, site_prior=None, joint_ys=None,
                  site_names=None, label_names=None, x_size=None) -> Scenario:
    """Convenience constructor that sizes the alphabets from the inputs.

    ``scanners`` is a list of :class:`ScannerModel` in site order; site names
    default to the scanners' ``site`` fields.
    """
    scanners = list(scanners)
    if site_names is None:
        site_names = [sc.site for sc in scanners]
    if joint_ys is not None:
        joint_ys = np.asarray(joint_ys, dtype=float)
        ny = joint_ys.shape[0]
        joint_ys = tuple(joint_ys.ravel().tolist())
    else:
        ny = len(label_prior)
    ys = Alphabet(Y, ny, label_names)
    ss = Alphabet(S, len(site_names), site_names)
    if x_size is None:
        x_size = max(sc.required_x_size(ny) for sc in scanners)
    xs = Alphabet(X, x_size)
    return Scenario(ys, ss, xs, tuple(scanners), label_prior=label_prior, site_prior=site_prior,
                    joint_ys=joint_ys)


def build_joint(scenario: Scenario) -> JointDistribution:
    """Exact ``p(y, s, x) = p(y, s) p(x | y, s)``."""
    ys, ss, xs = scenario.label_alphabet, scenario.site_alphabet, scenario.observation_alphabet
    pys = scenario.coupling()
    pys = pys / pys.sum()
    mass = np.zeros((ys.size, ss.size, xs.size))
    for j, site in enumerate(ss.labels):
        sc = scenario.scanner(site)
        if sc is None:
            if pys[:, j].sum() > 0:
                raise ValidationError(f"site {site!r} has positive mass but no scanner")
            continue
        table = Channel(ys, xs, sc.table(ys.size, xs.size)).rows
        mass[:, j, :] = pys[:, j, None] * table
    return JointDistribution([ys, ss, xs], mass)


@dataclass(frozen=True)
class SiteInformationProfile:
    """Per-site label information ``I(y, x | s = site)`` and its minimum."""

    per_site: dict
    minimum_site: str
    minimum_value: float
    unconditional: float
    average: float
    skipped_sites: tuple = field(default=())


def per_site_information(joint: JointDistribution, label="y", site="s", obs="x") -> SiteInformationProfile:
    """Compute each site's ``I(y, x | s=site)``, the least informative site, and ``I(y, x)``.

    Zero-mass sites are listed in ``skipped_sites`` rather than scored.
    """
    per_site = mutual_information_by_value(joint, label, obs, site)
    if not per_site:
        raise UsageError("no site has positive mass")
    skipped = tuple(l for l in joint.alphabet(site).labels if l not in per_site)
    minimum_site = min(per_site, key=lambda k: (per_site[k], list(per_site).index(k)))
    return SiteInformationProfile(
        per_site=per_site,
        minimum_site=minimum_site,
        minimum_value=per_site[minimum_site],
        unconditional=mutual_information(joint, label, obs),
        average=conditional_mutual_information(joint, label, obs, site),
        skipped_sites=skipped,
    )


def site_exclusive_labels(joint: JointDistribution, label="y", site="s") -> dict:
    """Map each label to the tuple of sites where ``p(y, s) > 0``.

    A label mapped to a single site is site-exclusive; an empty tuple marks a
    label with no mass at all.
    """
    pys = marginalize(joint, (label, site)).mass
    sites = joint.alphabet(site).labels
    return {lab: tuple(sites[j] for j in np.flatnonzero(pys[i] > 0))
            for i, lab in enumerate(joint.alphabet(label).labels)}


def exclusive_labels(joint: JointDistribution, label="y", site="s") -> dict:
    """Only the site-exclusive labels: ``{label: home site}``."""
    return {lab: ss[0] for lab, ss in site_exclusive_labels(joint, label, site).items() if len(ss) == 1}


def _site_names(n):
    return [f"s{i}" for i in range(n)]


def _dirichlet_rows(rng, n_rows, n_cols, concentration):
    return rng.dirichlet(np.full(n_cols, concentration), size=n_rows)


def random_scenario(seed, sizes=(2, 2, 2), independence=True, concentration=1.0,
                    identical_scanners=False) -> Scenario:
    """Seeded random scenario with explicit scanners.

    Priors, coupling and scanner rows are symmetric-Dirichlet draws with the
    given concentration.  ``identical_scanners`` reuses one channel at every
    site.
    """
    ny, ns, nx = (int(n) for n in sizes)
    if min(ny, ns, nx) < 1:
        raise UsageError(f"sizes must be >= 1, got {sizes}")
    if concentration <= 0:
        raise UsageError("concentration must be positive")
    rng = np.random.default_rng(seed)
    names = _site_names(ns)
    if identical_scanners:
        shared = _dirichlet_rows(rng, ny, nx, concentration)
        tables = [shared] * ns
    else:
        tables = [_dirichlet_rows(rng, ny, nx, concentration) for _ in range(ns)]
    scanners = [ScannerModel.explicit(n, t) for n, t in zip(names, tables)]
    if independence:
        lp = rng.dirichlet(np.full(ny, concentration))
        sp = rng.dirichlet(np.full(ns, concentration))
        return make_scenario(scanners, label_prior=tuple(lp.tolist()), site_prior=tuple(sp.tolist()),
                             site_names=names, x_size=nx)
    j = rng.dirichlet(np.full(ny * ns, concentration)).reshape(ny, ns)
    return make_scenario(scanners, joint_ys=j, site_names=names, x_size=nx)


# ---------------------------------------------------------------------------
# reference worlds used throughout the tests and demos

def two_site_bsc_scenario(eps_a=0.1, eps_b=0.4) -> Scenario:
    """Uniform binary label, uniform independent sites A and B, BSC scanners."""
    return make_scenario([ScannerModel.bsc("A", eps_a), ScannerModel.bsc("B", eps_b)],
                         label_prior=(0.5, 0.5), site_prior=(0.5, 0.5))


def identical_bsc_scenario(eps=0.1) -> Scenario:
    """Two sites sharing the same BSC scanner."""
    return two_site_bsc_scenario(eps, eps)


def site_exclusive_scenario() -> Scenario:
    """Three labels, noiseless scanners, label 2 only ever seen at site B.

    ``p(y | A) = (1/2, 1/2, 0)``, ``p(y | B) = (1/3, 1/3, 1/3)``, sites uniform.
    """
    joint = np.array([[1 / 4, 1 / 6], [1 / 4, 1 / 6], [0.0, 1 / 6]])
    return make_scenario([ScannerModel.identity("A", 3), ScannerModel.identity("B", 3)], joint_ys=joint)
