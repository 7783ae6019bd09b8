"""Exact finite-alphabet testbed for site-invariant representations.

Build a multi-site scanner world, push it through an encoder, and audit how
much label information survives once the representation carries no site
information.
"""
from .errors import (
    CapacityError,
    IRDPIError,
    NumericalError,
    ParseError,
    UnsupportedConditionError,
    UsageError,
    ValidationError,
)
from .prob_core import (
    Alphabet,
    Channel,
    JointDistribution,
    binary_entropy,
    condition,
    conditional_mutual_information,
    entropy,
    marginalize,
    mutual_information,
    mutual_information_by_value,
    push_through_channel,
)
from .scenarios import (
    ScannerModel,
    Scenario,
    SiteInformationProfile,
    build_joint,
    identical_bsc_scenario,
    make_scenario,
    per_site_information,
    random_scenario,
    site_exclusive_labels,
    site_exclusive_scenario,
    two_site_bsc_scenario,
)
from .lab import *  # noqa: F401,F403

__version__ = "0.1.0"
