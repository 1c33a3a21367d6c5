"""
Командная строка: коды возврата, отчёт в stdout и его схема
"""

import json
from pathlib import Path

import pytest
from jsonschema import Draft202012Validator

from nagata.main import main
from nagata.services import corpus
from tests.strategies import space_json

SCHEMA = json.loads((Path(__file__).parent.parent / "schemas" / "run_report.schema.json").read_text(encoding="utf-8"))


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    report = json.loads(captured.out) if captured.out.strip() else None
    return code, report, captured.err


@pytest.fixture
def path_file(write_json, path5):
    return write_json("path5.json", space_json(path5))


@pytest.fixture
def halves_file(write_json):
    return write_json("halves.json", {"elements": [["0", "1", "2"], ["2", "3", "4"]]})


class TestExitCodes:
    def test_valid_metric(self, capsys, path_file):
        code, report, err = run(capsys, ["validate", "--space", path_file])
        assert code == 0
        assert report["passed"]
        assert report["result"]["violations"] == []
        assert "validate: 1 checks, 0 failed" in err

    def test_broken_triangle(self, capsys, write_json, broken_triangle):
        code, report, err = run(capsys, ["validate", "--space", write_json("b.json", space_json(broken_triangle))])
        assert code == 1
        assert not report["passed"]
        assert report["checks"][0]["witness"]["points"] == ["a", "b", "c"]
        assert "metric_axioms" in err

    def test_missing_file(self, capsys, tmp_path):
        code, report, _ = run(capsys, ["validate", "--space", str(tmp_path / "absent.json")])
        assert code == 2
        assert report is None

    def test_bad_arguments(self, capsys, path_file):
        assert run(capsys, ["transform", "--space", path_file, "--mode", "sideways", "--epsilon", "1"])[0] == 2
        assert run(capsys, ["transform", "--space", path_file, "--mode", "max", "--epsilon", "abc"])[0] == 2
        assert run(capsys, ["no-such-command"])[0] == 2

    def test_invalid_parameter(self, capsys, path_file):
        code, _, err = run(capsys, ["transform", "--space", path_file, "--mode", "max", "--epsilon", "0"])
        assert code == 2
        assert err.strip()

    def test_dim_zero_clusters(self, capsys, write_json, two_clusters):
        code, report, _ = run(capsys, ["dim0", "--space", write_json("c.json", space_json(two_clusters)), "--C", "2"])
        assert code == 0
        assert report["result"]["bounded"]

    def test_dim_zero_long_chain(self, capsys, write_json):
        space = write_json("p.json", space_json(corpus.path_space(10)))
        code, report, _ = run(capsys, ["dim0", "--space", space, "--C", "2", "--scales", "1"])
        assert code == 1
        assert report["result"]["scales"][0]["witness"] == [str(i) for i in range(10)]

    def test_hyperbolize(self, capsys, path_file):
        code, report, _ = run(capsys, ["hyperbolize", "--space", path_file, "--n", "1", "--C", "4"])
        assert code == 0
        assert report["result"]["tower"]["height"] == 2

    def test_refine_with_nearest_point_oracle(self, capsys, path_file, halves_file):
        code, report, _ = run(capsys, [
            "refine", "--space", path_file, "--cover", halves_file, "--r", "1",
            "--sphere-oracle", "nearest_point", "--sphere-C", "1",
        ])
        assert code == 0
        assert report["result"]["cover"] == [["0", "1", "2"], ["3", "4"]]

    def test_nearest_point_needs_constant(self, capsys, path_file, halves_file):
        code, _, _ = run(capsys, [
            "refine", "--space", path_file, "--cover", halves_file, "--r", "1", "--sphere-oracle", "nearest_point",
        ])
        assert code == 2


class TestReport:
    def test_report_matches_schema(self, capsys, path_file, halves_file):
        for argv in (
            ["validate", "--space", path_file],
            ["lebesgue", "--space", path_file, "--cover", halves_file],
            ["nerve", "--space", path_file, "--cover", halves_file],
            ["dim", "--space", path_file, "--C", "1", "--scales", "1,2"],
            ["hyperbolize", "--space", path_file, "--n", "1", "--C", "4", "--all-basepoints"],
        ):
            code, report, _ = run(capsys, argv)
            assert code == 0
            Draft202012Validator(SCHEMA).validate(report)
            assert report["argv"] == argv

    def test_input_digests(self, capsys, path_file, halves_file):
        _, report, _ = run(capsys, ["lebesgue", "--space", path_file, "--cover", halves_file])
        assert set(report["input_digests"]) == {"space", "cover"}
        assert all(d.startswith("sha256:") for d in report["input_digests"].values())

    def test_exact_numbers(self, capsys, path_file):
        _, report, _ = run(capsys, ["transform", "--space", path_file, "--mode", "min", "--epsilon", "5/2", "--exact"])
        assert report["exact"]
        assert report["result"]["epsilon"] == "5/2"
        assert report["result"]["space"]["dist"][0][4] == "5/2"

    def test_float_numbers(self, capsys, path_file):
        _, report, _ = run(capsys, ["transform", "--space", path_file, "--mode", "min", "--epsilon", "5/2"])
        assert report["result"]["epsilon"] == 2.5

    def test_dimension_of_path(self, capsys, path_file):
        _, report, _ = run(capsys, ["dim", "--space", path_file, "--C", "1", "--scales", "1,2", "--exact"])
        assert report["result"]["n_lower"] == 1
        assert report["result"]["n_upper"] == 1
        assert report["result"]["exact"]

    def test_json_out(self, capsys, tmp_path, path_file):
        target = tmp_path / "report.json"
        _, report, _ = run(capsys, ["validate", "--space", path_file, "--json-out", str(target)])
        assert json.loads(target.read_text(encoding="utf-8")) == report

    def test_same_input_same_report(self, capsys, path_file):
        first = run(capsys, ["dim", "--space", path_file, "--C", "1", "--scales", "1,2"])[1]
        second = run(capsys, ["dim", "--space", path_file, "--C", "1", "--scales", "1,2"])[1]
        assert first == second

    def test_schema_command(self, capsys):
        code, schema, _ = run(capsys, ["schema"])
        assert code == 0
        assert schema["title"] == "RunReport"

    def test_corpus(self, capsys):
        code, report, _ = run(capsys, ["corpus", "--scale", "0.01", "--only", "mcshane", "convex", "--seed", "4"])
        assert code == 0
        assert report["result"]["instances"] == {"mcshane": 10, "convex": 2}
        assert report["seed"] == 4
