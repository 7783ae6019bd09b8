import filecmp
import json
import os
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from irdpi import ParseError, build_joint, random_scenario, site_exclusive_labels
from irdpi.cli import RunConfig, dispatch, main
from irdpi.reports import dumps
from irdpi.scenario_io import parse_scenario, read_scenario, serialize_scenario
from irdpi.scenarios import ScannerModel, make_scenario, site_exclusive_scenario, two_site_bsc_scenario

SCEN = Path(__file__).resolve().parents[1] / "scenarios"

BSC_TEXT = (SCEN / "two_site_bsc.txt").read_text()


class TestParse:
    def test_two_site_bsc(self):
        sc = parse_scenario(BSC_TEXT)
        assert sc.scanner("A") == ScannerModel.bsc("A", 0.1)
        assert sc.scanner("B") == ScannerModel.bsc("B", 0.4)
        assert sc == two_site_bsc_scenario()

    def test_spec_layout_example(self):
        text = """
        [labels]            # either "size = k" (uniform prior) or "prior = p0,p1,..."
        size = 2
        [sites]
        names = A,B
        prior = 0.5,0.5     # omit and provide [coupling] joint for correlated y,s
        [coupling]          # optional; row-major p(y,s) table, overrides priors
        joint = 0.25,0.25, 0.25,0.25
        [scanner.A]
        kind = bsc
        epsilon = 0.1
        [scanner.B]
        kind = explicit
        x_size = 3
        rows = 0.9,0.1,0.0, 0.1,0.9,0.0   # row-major p(x|y, s=B)
        """
        sc = parse_scenario(text)
        assert not sc.independent and sc.observation_alphabet.size == 3
        j = build_joint(sc)
        assert np.allclose(j.mass[:, 0, 2], 0)

    def test_bad_row_names_site_and_row(self):
        text = BSC_TEXT.replace("kind = bsc\nepsilon = 0.4", "kind = explicit\nx_size = 2\nrows = 0.5,0.4, 0.5,0.5")
        with pytest.raises(ParseError, match=r"scanner\.B.*row 0"):
            parse_scenario(text)

    def test_exclusive_label_flagged(self):
        sc = read_scenario(SCEN / "site_exclusive.txt")
        assert site_exclusive_labels(build_joint(sc))["2"] == ("B",)
        assert sc.joint_ys[4] == 0.0

    @pytest.mark.parametrize("text, pattern", [
        ("[labels]\nsize = 2\ncolour = red\n", r"line 3: unknown key 'colour'"),
        ("size = 2\n", r"line 1: key outside"),
        ("[labels\n", r"line 1: malformed"),
        ("[labels]\nsize = two\n", r"line 2: .*not an integer"),
        ("[labels]\nsize = 2\n[sites]\nnames = A\n[scanner.A]\nkind = bsc\nepsilon = 0.1\ndelta = 0.2\n", r"line 8: unknown key 'delta'"),
        ("[labels]\nsize = 2\n[sites]\nnames = A,B\n[scanner.A]\nkind = bsc\nepsilon = 0.1\n", r"no scanner for site\(s\) B"),
        ("[labels]\nsize = 2\n[sites]\nnames = A\n[scanner.Q]\nkind = bsc\nepsilon = 0.1\n", r"line 5: scanner for undeclared site"),
        ("[labels]\nsize = 2\n[wat]\n", r"line 3: unknown section"),
    ])
    def test_errors(self, text, pattern):
        with pytest.raises(ParseError, match=pattern):
            parse_scenario(text)

    def test_mixed_kinds(self):
        sc = read_scenario(SCEN / "mixed_kinds.txt")
        assert sc.observation_alphabet.size == 3
        build_joint(sc)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.tuples(st.integers(1, 4), st.integers(1, 4), st.integers(1, 4)),
       st.booleans())
def test_round_trip(seed, sizes, indep):
    sc = random_scenario(seed, sizes, indep)
    assert parse_scenario(serialize_scenario(sc)) == sc


@pytest.mark.parametrize("sc", [two_site_bsc_scenario(), site_exclusive_scenario(),
                                make_scenario([ScannerModel.erasure("a", 0.3)], label_prior=(0.2, 0.8),
                                              site_prior=(1.0,), label_names=["neg", "pos"])])
def test_round_trip_named(sc):
    assert parse_scenario(serialize_scenario(sc)) == sc


def test_json_floats_round_trip():
    values = [0.1, 1 / 3, 2.0 ** -1074, 1e308, 0.5310044064107189]
    text = dumps({"v": values})
    assert json.loads(text)["v"] == values
    assert "0.10000000000000001" in text


def run(tmp_path, *args):
    out = tmp_path / "out"
    code = main(list(args) + ["--out", str(out)])
    return code, out


class TestDispatch:
    def test_info(self, tmp_path):
        code, out = run(tmp_path, "info", "--scenario", str(SCEN / "two_site_bsc.txt"), "--encoder", "identity")
        assert code == 0
        data = json.loads((out / "report.json").read_text())
        prof = data["payload"]["profile"]["per_site"]
        assert prof["A"] == pytest.approx(0.5310044, abs=1e-7)
        assert prof["B"] == pytest.approx(0.0290494, abs=1e-7)
        assert data["payload"]["report"]["i_z_s"] == pytest.approx(0, abs=1e-15)

    def test_prop1_enumerate(self, tmp_path):
        code, out = run(tmp_path, "prop1", "--scenario", str(SCEN / "identical_bsc.txt"), "--encoder", "enumerate")
        assert code == 0
        rep = json.loads((out / "prop1.json").read_text())["payload"]
        assert rep["verdict"] == "holds" and rep["slack"] >= 0

    def test_prop2_autodetect(self, tmp_path):
        code, out = run(tmp_path, "prop2", "--scenario", str(SCEN / "site_exclusive.txt"))
        assert code == 0
        rep = json.loads((out / "prop2.json").read_text())["payload"]
        assert rep["exclusive_label"] == "2" and rep["home_site"] == "B" and rep["recall_at_home"] == 1.0

    def test_encoder_file(self, tmp_path):
        enc = tmp_path / "enc.json"
        enc.write_text(json.dumps({"rows": [[1, 0], [1, 0]]}))
        code, out = run(tmp_path, "info", "--scenario", str(SCEN / "two_site_bsc.txt"), "--encoder", str(enc))
        assert code == 0
        assert json.loads((out / "report.json").read_text())["payload"]["report"]["i_y_z"] == 0

    def test_optimize_encoder(self, tmp_path):
        code, out = run(tmp_path, "info", "--scenario", str(SCEN / "site_exclusive.txt"), "--encoder", "optimize",
                        "--lambda", "1000", "--restarts", "3")
        assert code == 0
        assert json.loads((out / "report.json").read_text())["payload"]["report"]["i_z_s"] <= 1e-6

    def test_frontier_files(self, tmp_path):
        code, out = run(tmp_path, "frontier", "--scenario", str(SCEN / "two_site_bsc.txt"), "--lambda-points", "3",
                        "--restarts", "2")
        assert code == 0
        lines = (out / "frontier.csv").read_bytes().split(b"\n")
        assert lines[0] == b"lambda,i_y_z_bits,i_z_s_bits,risk,converged,restarts_used"
        assert len(lines) == 6 and lines[-1] == b"" and b"\r" not in (out / "frontier.csv").read_bytes()
        assert (out / "pareto.csv").exists() and (out / "report.json").exists()

    def test_search_files(self, tmp_path):
        code, out = run(tmp_path, "search", "--instances", "4", "--seed", "2")
        assert code == 0
        summary = (out / "summary.csv").read_text().splitlines()
        assert summary[0].startswith("instance,") and summary[1].startswith("0,")

    def test_parse_error_exit_1(self, tmp_path):
        bad = tmp_path / "bad.txt"
        bad.write_text("[labels]\nsize = 2\nfoo = 1\n")
        assert run(tmp_path, "info", "--scenario", str(bad))[0] == 1

    def test_missing_scenario_exit_1(self, tmp_path):
        assert run(tmp_path, "info")[0] == 1
        assert run(tmp_path, "info", "--scenario", str(tmp_path / "nope.txt"))[0] == 1

    def test_bad_flag_exit_1(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["frontier", "--bogus"])
        assert exc.value.code == 1

    def test_capacity_exit_3(self, tmp_path):
        sc = random_scenario(0, (2, 2, 14))
        path = tmp_path / "big.txt"
        path.write_text(serialize_scenario(sc))
        assert run(tmp_path, "prop1", "--scenario", str(path), "--encoder", "enumerate")[0] == 3

    def test_numerical_exit_2(self, tmp_path, monkeypatch):
        from irdpi import errors
        import irdpi.cli as cli

        def boom(ctx):
            raise errors.NumericalError("mutual information = -1e-6 bits")

        monkeypatch.setitem(cli._RUNNERS, "info", boom)
        code, files = dispatch(RunConfig("info", scenario_path="x", output_dir=str(tmp_path)))
        assert code == 2


def test_determinism(tmp_path):
    for cmd in (["frontier", "--scenario", str(SCEN / "site_exclusive.txt"), "--lambda-points", "4",
                 "--restarts", "3"],
                ["search", "--instances", "15", "--scanner-family", "independent-random"]):
        a, b = tmp_path / "a", tmp_path / "b"
        assert main(cmd + ["--seed", "11", "--out", str(a)]) == 0
        assert main(cmd + ["--seed", "11", "--out", str(b)]) == 0
        names = sorted(os.listdir(a))
        assert names == sorted(os.listdir(b))
        match, mismatch, errs = filecmp.cmpfiles(a, b, names, shallow=False)
        assert not mismatch and not errs
