"""Randomized stress test of the worst-site bound."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import UsageError
from ..scenarios import (
    ScannerModel,
    Scenario,
    build_joint,
    make_scenario,
    random_scenario,
    two_site_bsc_scenario,
)
from .audits import Prop1Report, check_prop1
from .enumerate import enumerate_deterministic_optimum

SCANNER_FAMILIES = ("identical", "independent-random", "free-random")


@dataclass(frozen=True)
class SearchConfig:
    instances: int = 100
    seed: int = 0
    sizes: tuple = (2, 2, 3)
    z_size: int = None
    invariance_tolerance: float = 1e-9
    slack_margin: float = 1e-6
    scanner_family: str = "free-random"
    concentration: float = 1.0


@dataclass(frozen=True)
class CatalogEntry:
    instance: int
    scenario: Scenario
    encoder_map: tuple
    report: Prop1Report


@dataclass(frozen=True)
class SearchResult:
    config: SearchConfig
    instances_run: int
    catalog: tuple = field(default=())


def _free_random(rng, sizes, concentration):
    ny, ns, nx = sizes
    conc = float(np.exp(rng.uniform(np.log(0.2), np.log(5.0)))) * concentration
    names = [f"s{i}" for i in range(ns)]
    scanners = []
    for name in names:
        if ny == 2 and nx >= 2 and rng.random() < 0.5:
            scanners.append(ScannerModel.bsc(name, float(rng.uniform(0.0, 0.5))))
        else:
            scanners.append(ScannerModel.explicit(name, rng.dirichlet(np.full(nx, conc), size=ny)))
    lp = rng.dirichlet(np.full(ny, conc))
    sp = rng.dirichlet(np.full(ns, conc))
    return make_scenario(scanners, label_prior=tuple(lp.tolist()), site_prior=tuple(sp.tolist()),
                         site_names=names, x_size=nx)


def search_instance(config: SearchConfig, i: int) -> Scenario:
    """The ``i``-th scenario of a search; always independent label/site coupling."""
    family = config.scanner_family
    seed = [int(config.seed), int(i)]
    if family == "identical":
        return random_scenario(seed, config.sizes, True, config.concentration, identical_scanners=True)
    if family == "independent-random":
        return random_scenario(seed, config.sizes, True, config.concentration)
    if family == "free-random":
        if i == 0:
            return two_site_bsc_scenario(0.1, 0.4)
        return _free_random(np.random.default_rng(seed), config.sizes, config.concentration)
    raise UsageError(f"unknown scanner family {family!r}; use one of {SCANNER_FAMILIES}")


def counterexample_search(config: SearchConfig) -> SearchResult:
    """Audit the invariant-optimal deterministic encoder on random scenarios.

    Each instance records a catalog entry when the bound's hypotheses hold and
    the slack falls below ``-slack_margin``.  In the ``free-random`` family,
    instance 0 is the two-site BSC(0.1)/BSC(0.4) probe.
    """
    if config.scanner_family not in SCANNER_FAMILIES:
        raise UsageError(f"unknown scanner family {config.scanner_family!r}")
    catalog = []
    hyp_tol = max(1e-9, config.invariance_tolerance)
    for i in range(int(config.instances)):
        scenario = search_instance(config, i)
        joint = build_joint(scenario)
        z_size = config.z_size or joint.alphabet("x").size
        encoder, _ = enumerate_deterministic_optimum(joint, z_size, config.invariance_tolerance)
        report = check_prop1(joint, encoder, hypothesis_tolerance=hyp_tol)
        if report.hypothesis_satisfied and report.slack < -config.slack_margin:
            mapping = tuple(int(k) for k in np.argmax(encoder.table, axis=1))
            catalog.append(CatalogEntry(i, scenario, mapping, report))
    return SearchResult(config=config, instances_run=int(config.instances), catalog=tuple(catalog))
