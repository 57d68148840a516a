import json
import xml.etree.ElementTree as ET
from fractions import Fraction as F
from importlib import resources

import pytest

from detic.channel import make_channel
from detic.cli import main
from detic.decode import receiver_view
from detic.regions import classify
from detic.scheme import build_assignment, layout_for


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


class TestClassify:
    def test_worked_example(self, capsys):
        code, out = run(capsys, "classify", "--alpha", "8/5", "--beta", "9/10")
        payload = json.loads(out)
        assert code == 0
        assert payload["region"] == "Df"
        assert payload["dsym"] == "11/20"
        assert payload["eps"] == "4/15"
        assert payload["delta"] == "7/30"
        assert payload["converseBound"] == "13/20"

    def test_decimal_flags(self, capsys):
        code, out = run(capsys, "classify", "--alpha-decimal", "1.6", "--beta-decimal", "0.9")
        assert code == 0
        assert json.loads(out)["region"] == "Df"

    def test_uncovered_reports_dash(self, capsys):
        code, out = run(capsys, "classify", "--alpha", "2/1", "--beta", "1/2")
        payload = json.loads(out)
        assert code == 0
        assert payload["region"] == "-"
        assert payload["dsym"] is None

    def test_out_of_square_is_usage_error(self, capsys):
        code, out = run(capsys, "classify", "--alpha", "3/1", "--beta", "0/1")
        assert code == 2
        assert "error" in json.loads(out)

    def test_bad_literal_is_usage_error(self, capsys):
        code, out = run(capsys, "classify", "--alpha", "1.6", "--beta", "9/10")
        assert code == 2


class TestPlan:
    def test_worked_example_counts(self, capsys):
        code, out = run(capsys, "plan", "--alpha", "8/5", "--beta", "9/10", "--n", "60")
        payload = json.loads(out)
        assert code == 0
        assert payload["counts"] == [6, 9, 6, 12, 9, 6, 12]
        assert payload["m"] == 33
        assert payload["minimalN"] == 20

    def test_default_n_is_minimal(self, capsys):
        code, out = run(capsys, "plan", "--alpha", "8/5", "--beta", "9/10")
        payload = json.loads(out)
        assert code == 0
        assert payload["n"] == payload["minimalN"] == 20

    def test_uncovered_is_check_failure(self, capsys):
        code, out = run(capsys, "plan", "--alpha", "2/1", "--beta", "1/2")
        assert code == 1
        assert "error" in json.loads(out)

    def test_non_integral_n_is_usage_error(self, capsys):
        code, out = run(capsys, "plan", "--alpha", "8/5", "--beta", "9/10", "--n", "10")
        payload = json.loads(out)
        assert code == 2
        assert payload["minimalN"] == 20


class TestSimulate:
    def test_worked_example(self, capsys):
        code, out = run(
            capsys, "simulate", "--alpha", "8/5", "--beta", "9/10",
            "--n", "60", "--k", "3", "--trials", "5", "--seed", "1",
        )
        payload = json.loads(out)
        assert code == 0
        assert payload["success"] is True
        assert payload["achievedRate"] == "11/20"
        assert payload["failures"] == 0

    def test_five_pairs(self, capsys):
        code, out = run(
            capsys, "simulate", "--alpha", "8/5", "--beta", "9/10",
            "--n", "20", "--k", "5", "--trials", "3", "--seed", "2",
        )
        payload = json.loads(out)
        assert code == 0
        assert payload["success"] is True

    def test_seed_determinism(self, capsys):
        args = ("simulate", "--alpha", "4/3", "--beta", "2/3", "--trials", "4", "--seed", "7")
        _, first = run(capsys, *args)
        _, second = run(capsys, *args)
        assert first == second

    def test_too_few_pairs_is_usage_error(self, capsys):
        code, out = run(capsys, "simulate", "--alpha", "4/3", "--beta", "2/3", "--k", "2")
        assert code == 2
        assert "error" in json.loads(out)


class TestVerify:
    @pytest.mark.parametrize("suite", ["table", "boundaries", "oracle", "search"])
    def test_suites_pass(self, capsys, suite):
        code, out = run(capsys, "verify", "--suite", suite)
        payload = json.loads(out)
        assert code == 0, payload
        assert payload["passed"] is True


class TestAtlas:
    def test_csv_grid_three(self, capsys):
        code, out = run(capsys, "atlas", "--grid", "3", "--format", "csv")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "alpha,beta,region,dsym"
        assert len(lines) == 10
        cells = {tuple(l.split(",")[:2]): l.split(",")[2:] for l in lines[1:]}
        assert cells[("2/1", "0/1")] == ["Aa", "1/1"]
        assert cells[("1/1", "1/1")] == ["-", ""]

    def test_svg_well_formed(self, capsys):
        code, out = run(capsys, "atlas", "--grid", "5", "--format", "svg")
        assert code == 0
        root = ET.fromstring(out)
        rects = [el for el in root.iter() if el.tag.endswith("rect")]
        assert len(rects) == 25

    def test_grid_too_small(self, capsys):
        code, _ = run(capsys, "atlas", "--grid", "1")
        assert code == 2


class TestRender:
    def test_svg_structure(self, capsys):
        code, out = run(
            capsys, "render", "--alpha", "8/5", "--beta", "9/10", "--n", "60",
            "--receiver", "1",
        )
        assert code == 0
        root = ET.fromstring(out)
        res = classify(F(8, 5), F(9, 10))
        assign = build_assignment(layout_for(res.region), res.region, F(8, 5), F(9, 10), 60)
        view = receiver_view(assign, make_channel(3, 60, F(8, 5), F(9, 10)), 1)
        rects = [el for el in root.iter() if el.tag.endswith("rect")]
        data_segments = sum(1 for s in assign.segments if s.role.is_data and s.count)
        zero_segments = sum(1 for s in assign.segments if not s.role.is_data and s.count)
        assert len(rects) == len(view.blocks) + data_segments + zero_segments

    def test_uncovered_point(self, capsys):
        code, _ = run(capsys, "render", "--alpha", "2/1", "--beta", "1/2")
        assert code == 1

    def test_receiver_out_of_range_is_usage_error(self, capsys):
        code, _ = run(capsys, "render", "--alpha", "8/5", "--beta", "9/10", "--receiver", "4")
        assert code == 2


class TestTableOverride:
    def test_table_flag(self, capsys, tmp_path):
        rows = json.loads(resources.files("detic.data").joinpath("regions.json").read_text())
        only_df = [r for r in rows if r["id"] == "Df"]
        path = tmp_path / "only_df.json"
        path.write_text(json.dumps(only_df))
        code, out = run(
            capsys, "--table", str(path), "classify", "--alpha", "2/1", "--beta", "0/1"
        )
        assert code == 0
        assert json.loads(out)["region"] == "-"

    def test_env_fallback(self, capsys, tmp_path, monkeypatch):
        rows = json.loads(resources.files("detic.data").joinpath("regions.json").read_text())
        path = tmp_path / "table.json"
        path.write_text(json.dumps(rows))
        monkeypatch.setenv("DETIC_TABLE", str(path))
        code, out = run(capsys, "classify", "--alpha", "8/5", "--beta", "9/10")
        assert code == 0
        assert json.loads(out)["region"] == "Df"
