#!/usr/bin/env python3
"""
End-to-end tests for the command-line entry point and the verification suites
"""

import json

import pandas as pd
import pytest

from errors import ParameterOutOfRange
from geo_cli import cli
from constructions import regular_body
from suites import OUTER_T_COUNT, SUITES, SuiteConfig, run_suite


def run_json(capsys, argv):
    code = cli(argv)
    return code, json.loads(capsys.readouterr().out)


@pytest.fixture
def planar_body(tmp_path):
    path = tmp_path / "small.json"
    assert cli(["construct", "small-asym", "--n", "2", "--k", "1", "--s", "1.5", "-o", str(path)]) == 0
    return path


class TestCommands:
    def test_john_asymmetry_of_simplex(self, tmp_path, capsys):
        path = tmp_path / "simplex.json"
        assert cli(["construct", "simplex", "--n", "3", "-o", str(path)]) == 0
        capsys.readouterr()
        code, out = run_json(capsys, ["asymmetry", str(path), "--measure", "john"])
        assert code == 0
        assert out["value"] == pytest.approx(3.0)

    def test_decomposition_of_cube(self, tmp_path, capsys):
        path = tmp_path / "cube.json"
        cli(["construct", "cube", "--n", "3", "-o", str(path)])
        capsys.readouterr()
        code, out = run_json(capsys, ["decomposition", str(path)])
        assert code == 0
        assert out["weights"] == pytest.approx([0.5] * 6, abs=1e-9)
        assert out["residuals"]["passed"]

    def test_outer_kradius_on_coordinate_plane(self, tmp_path, capsys):
        path = tmp_path / "cube.json"
        cli(["construct", "cube", "--n", "3", "--position", "loewner", "-o", str(path)])
        capsys.readouterr()
        code, out = run_json(capsys, ["kradius", str(path), "--k", "2", "--subspace", "0,1"])
        assert code == 0
        assert out["measured"] == pytest.approx((2 / 3) ** 0.5)

    def test_loewner_normalization(self, tmp_path, capsys):
        path = tmp_path / "simplex.json"
        image = tmp_path / "image.json"
        cli(["construct", "simplex", "--n", "2", "-o", str(path)])
        capsys.readouterr()
        code, out = run_json(capsys, ["loewner", str(path), "-o", str(image)])
        assert code == 0
        assert out["position"] == "loewner"
        assert image.exists()

    def test_plot2d_writes_svg(self, planar_body, tmp_path):
        out = tmp_path / "small.svg"
        assert cli(["plot2d", str(planar_body), "-o", str(out)]) == 0
        assert "<svg" in out.read_text()


class TestExitCodes:
    def test_malformed_json(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        assert cli(["asymmetry", str(path)]) == 2
        assert "[ERROR] json" in capsys.readouterr().err

    def test_missing_field(self, tmp_path, capsys):
        path = tmp_path / "partial.json"
        path.write_text(json.dumps({"type": "vpolytope", "dim": 2}))
        assert cli(["asymmetry", str(path)]) == 2
        assert "[ERROR] vertices: missing" in capsys.readouterr().err

    def test_missing_file(self, tmp_path):
        assert cli(["asymmetry", str(tmp_path / "nowhere.json")]) == 2

    def test_out_of_range_parameter(self, tmp_path):
        assert cli(["construct", "outer", "--n", "3", "--t", "2.5", "-o", str(tmp_path / "x.json")]) == 2

    def test_unknown_family(self, tmp_path):
        assert cli(["construct", "torus", "--n", "3", "-o", str(tmp_path / "x.json")]) == 2

    def test_n_max_too_small(self):
        assert cli(["verify", "oracles", "--n-max", "1"]) == 2

    def test_body_not_in_john_position(self, tmp_path):
        path = tmp_path / "shifted.json"
        path.write_text(json.dumps({"type": "vpolytope", "dim": 2,
                                    "vertices": [[0, 0], [2, 0], [0, 2], [2, 2]]}))
        assert cli(["decomposition", str(path)]) == 1


class TestVerify:
    def test_scalar_lemmas_pass(self, tmp_path, capsys):
        report = tmp_path / "scalars.csv"
        assert cli(["verify", "scalar-lemmas", "--n-max", "3", "-o", str(report)]) == 0
        df = pd.read_csv(report)
        assert df["pass"].all()
        assert df["case_id"].is_monotonic_increasing
        assert "[INFO] scalar-lemmas" in capsys.readouterr().out

    def test_planar_diameter_on_input_body(self, planar_body):
        assert cli(["verify", "planar-diameter", "--body", str(planar_body)]) == 0

    def test_reports_are_reproducible(self):
        cfg = SuiteConfig("scalar-lemmas", n_range=(2,), samples=2, seed=3)
        assert run_suite(cfg) == run_suite(cfg)

    def test_outer_grid_keeps_every_t(self):
        rows = run_suite(SuiteConfig("outer-bound", n_range=(2,), samples=0, restarts=2))
        grid = [r for r in rows if r["case_id"].startswith("n2-k1-t")]
        assert len(grid) == OUTER_T_COUNT
        skipped = [r for r in grid if r["method"].startswith("not-applicable")]
        assert skipped and all(r["t"] > 1 and r["pass"] for r in skipped)
        assert len(skipped) == sum(r["t"] > 1 for r in grid)

    def test_body_rejected_by_suites_that_ignore_it(self, planar_body):
        assert cli(["verify", "oracles", "--body", str(planar_body)]) == 2


class TestSuiteConfig:
    def test_unknown_suite(self):
        with pytest.raises(ParameterOutOfRange):
            SuiteConfig("everything")

    def test_bodies_only_for_body_suites(self):
        cube = regular_body("cube", 2)
        with pytest.raises(ParameterOutOfRange):
            SuiteConfig("outer-bound", bodies=(cube,))
        assert SuiteConfig("planar-diameter", bodies=(cube,)).bodies == (cube,)

    def test_every_suite_is_named(self):
        assert len(SUITES) == 8
        assert "oracles" in SUITES
