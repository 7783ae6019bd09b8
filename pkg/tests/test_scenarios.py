import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from irdpi import (
    ScannerModel,
    UsageError,
    ValidationError,
    build_joint,
    condition,
    make_scenario,
    mutual_information,
    per_site_information,
    random_scenario,
    site_exclusive_labels,
    two_site_bsc_scenario,
)

from conftest import h2


def test_identity_scanners_are_deterministic():
    sc = make_scenario([ScannerModel.identity("A", 2), ScannerModel.identity("B", 2)],
                       label_prior=(0.5, 0.5), site_prior=(0.5, 0.5))
    j = build_joint(sc)
    expected = np.zeros((2, 2, 2))
    for y in (0, 1):
        expected[y, :, y] = 0.25
    assert np.array_equal(j.mass, expected)


def test_bsc_slices(bsc_joint):
    for site, e in (("A", 0.1), ("B", 0.4)):
        sl = condition(bsc_joint, "s", site).mass
        rows = sl / sl.sum(axis=1, keepdims=True)
        assert np.allclose(rows, [[1 - e, e], [e, 1 - e]], atol=1e-12)


def test_zero_mass_propagates(exclusive_joint):
    assert np.all(exclusive_joint.mass[2, 0, :] == 0)
    assert exclusive_joint.mass[2, 1, :].sum() > 0


def test_missing_scanner_for_positive_site():
    with pytest.raises(ValidationError):
        build_joint(make_scenario([ScannerModel.bsc("A", 0.1)], label_prior=(0.5, 0.5),
                                  site_prior=(0.5, 0.5), site_names=["A", "B"]))


def test_missing_scanner_for_empty_site_is_fine():
    sc = make_scenario([ScannerModel.bsc("A", 0.1)], label_prior=(0.5, 0.5),
                       site_prior=(1.0, 0.0), site_names=["A", "B"])
    prof = per_site_information(build_joint(sc))
    assert prof.skipped_sites == ("B",) and list(prof.per_site) == ["A"]


@pytest.mark.parametrize("bad", [
    dict(kind="bsc", param=1.5),
    dict(kind="gauss", param=0.1),
    dict(kind="explicit", rows=((0.5, 0.4),), x_size=2),
])
def test_scanner_validation(bad):
    with pytest.raises(ValidationError):
        ScannerModel("A", **bad)


def test_duplicate_scanner():
    with pytest.raises(ValidationError):
        make_scenario([ScannerModel.bsc("A", 0.1), ScannerModel.bsc("A", 0.2)],
                      label_prior=(0.5, 0.5), site_prior=(0.5, 0.5), site_names=["A", "B"])


def test_bsc_needs_binary_labels():
    sc = make_scenario([ScannerModel.bsc("A", 0.1)], label_prior=(0.2, 0.3, 0.5), site_prior=(1.0,), x_size=3)
    with pytest.raises(ValidationError):
        build_joint(sc)


class TestPerSiteInformation:
    def test_two_site_bsc(self, bsc_joint):
        prof = per_site_information(bsc_joint)
        assert prof.per_site["A"] == pytest.approx(0.5310044, abs=1e-7)
        assert prof.per_site["B"] == pytest.approx(0.0290494, abs=1e-7)
        assert prof.minimum_site == "B"
        # pooled channel is a BSC with crossover (0.1 + 0.4) / 2
        assert prof.unconditional == pytest.approx(1 - h2(0.25), abs=1e-12)
        assert prof.unconditional == pytest.approx(0.1887219, abs=1e-7)

    def test_identical_scanners(self, same_bsc_joint):
        prof = per_site_information(same_bsc_joint)
        assert prof.per_site["A"] == pytest.approx(prof.per_site["B"], abs=1e-15)
        assert prof.per_site["A"] == pytest.approx(prof.unconditional, abs=1e-12)

    def test_noiseless_site(self):
        sc = make_scenario([ScannerModel.identity("A", 2), ScannerModel.bsc("B", 0.3)],
                           label_prior=(0.5, 0.5), site_prior=(0.5, 0.5))
        assert per_site_information(build_joint(sc)).per_site["A"] == pytest.approx(1.0, abs=1e-15)

    @pytest.mark.parametrize("eps", np.round(np.arange(0, 0.5001, 0.05), 2).tolist())
    def test_bsc_closed_form(self, eps):
        sc = make_scenario([ScannerModel.bsc("A", eps)], label_prior=(0.5, 0.5), site_prior=(1.0,))
        assert per_site_information(build_joint(sc)).per_site["A"] == pytest.approx(1 - h2(eps), abs=1e-9)

    @pytest.mark.parametrize("ny", [2, 3, 5])
    @pytest.mark.parametrize("delta", [0.0, 0.3, 1.0])
    def test_erasure_closed_form(self, ny, delta):
        sc = make_scenario([ScannerModel.erasure("A", delta), ScannerModel.erasure("B", 0.5)],
                           label_prior=tuple([1 / ny] * ny), site_prior=(0.5, 0.5))
        prof = per_site_information(build_joint(sc))
        assert prof.per_site["A"] == pytest.approx((1 - delta) * np.log2(ny), abs=1e-9)


class TestRandomScenario:
    def test_deterministic(self):
        assert random_scenario(7, (3, 2, 4)) == random_scenario(7, (3, 2, 4))
        assert random_scenario(7, (3, 2, 4)) != random_scenario(8, (3, 2, 4))

    def test_bad_sizes(self):
        with pytest.raises(UsageError):
            random_scenario(0, (0, 2, 2))

    def test_identical_scanners(self):
        sc = random_scenario(3, (2, 3, 3), identical_scanners=True)
        assert len({s.rows for s in sc.scanners}) == 1

    def test_batch_builds(self):
        for seed in range(100):
            for indep in (True, False):
                j = build_joint(random_scenario(seed, (3, 3, 3), indep, concentration=[0.3, 1.0, 3.0][seed % 3]))
                assert np.all(j.mass >= 0) and abs(j.mass.sum() - 1) <= 1e-12


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.tuples(st.integers(1, 4), st.integers(1, 4), st.integers(1, 4)),
       st.sampled_from([0.2, 1.0, 5.0]))
def test_scenario_properties(seed, sizes, conc):
    j = build_joint(random_scenario(seed, sizes, True, conc))
    assert mutual_information(j, "s", "y") <= 1e-12
    prof = per_site_information(j)
    assert all(v >= 0 for v in prof.per_site.values())
    assert prof.minimum_value == min(prof.per_site.values())
    assert prof.minimum_value <= prof.average + 1e-9


class TestSiteExclusiveLabels:
    def test_full_support(self, bsc_joint):
        assert site_exclusive_labels(bsc_joint) == {"0": ("A", "B"), "1": ("A", "B")}

    def test_declared_zero(self, exclusive_joint):
        table = site_exclusive_labels(exclusive_joint)
        assert table["2"] == ("B",) and table["0"] == ("A", "B")

    def test_degenerate_label(self):
        sc = make_scenario([ScannerModel.identity("A", 3), ScannerModel.identity("B", 3)],
                           joint_ys=[[0.25, 0.25], [0.25, 0.25], [0.0, 0.0]])
        assert site_exclusive_labels(build_joint(sc))["2"] == ()
