"""
Чтение входных файлов
"""

import hashlib
from fractions import Fraction

import pytest

from nagata.core.errors import MalformedInputError
from nagata.models.maps import TargetKind
from nagata.services import loaders
from tests.strategies import space_json


class TestSpaces:
    def test_json_space(self, write_json, path5):
        space = loaders.load_space(write_json("space.json", space_json(path5)))
        assert space.labels == path5.labels
        assert space.distance("0", "4") == 4
        assert space.exact

    def test_float_entries_make_the_space_inexact(self, write_json):
        space = loaders.load_space(write_json("s.json", {"labels": ["x", "y"], "dist": [[0, 0.5], [0.5, 0]]}))
        assert not space.exact

    def test_missing_keys(self, write_json):
        with pytest.raises(MalformedInputError):
            loaders.load_space(write_json("s.json", {"labels": ["x"]}))

    def test_broken_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{labels:", encoding="utf-8")
        with pytest.raises(MalformedInputError):
            loaders.load_space(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(MalformedInputError):
            loaders.load_space(tmp_path / "absent.json")

    def test_csv_point_cloud(self, tmp_path):
        path = tmp_path / "cloud.csv"
        path.write_text("label,x,y\norigin,0,0\nfar,3,4\n", encoding="utf-8")
        assert loaders.load_space(path, "l2").distance("origin", "far") == 5
        assert loaders.load_space(path, "l1").distance("origin", "far") == 7

    def test_csv_without_labels(self, tmp_path):
        path = tmp_path / "cloud.csv"
        path.write_text("x\n1/2\n2\n", encoding="utf-8")
        space = loaders.load_space(path, "l1")
        assert space.labels == ("0", "1")
        assert space.d(0, 1) == Fraction(3, 2)

    def test_csv_needs_norm(self, tmp_path):
        path = tmp_path / "cloud.csv"
        path.write_text("x\n0\n1\n", encoding="utf-8")
        with pytest.raises(MalformedInputError):
            loaders.load_space(path)


class TestCoversAndDecompositions:
    def test_cover(self, write_json, path5):
        cover = loaders.load_cover(path5, write_json("c.json", {"elements": [["0", "1", "2"], ["2", "3", "4"]]}))
        assert cover.labelled() == [["0", "1", "2"], ["2", "3", "4"]]

    def test_cover_must_cover(self, write_json, path5):
        with pytest.raises(MalformedInputError) as error:
            loaders.load_cover(path5, write_json("c.json", {"elements": [["0", "1"]]}))
        assert error.value.details["uncovered"] == ["2", "3", "4"]

    def test_decomposition(self, write_json, path5):
        data = {"elements": [["0"], ["1"], ["2"], ["3"], ["4"]], "families": [[0, 2, 4], [1, 3]], "r": "3/2"}
        decomposition = loaders.load_decomposition(path5, write_json("d.json", data))
        assert decomposition.family_of == (0, 1, 0, 1, 0)
        assert decomposition.r == Fraction(3, 2)
        assert decomposition.k == 2

    @pytest.mark.parametrize("families", [[[0, 1], [1, 2, 3, 4]], [[0, 1, 2], [3]], [[0, 1, 2, 3, 9]]])
    def test_bad_family_lists(self, write_json, path5, families):
        data = {"elements": [["0"], ["1"], ["2"], ["3"], ["4"]], "families": families, "r": 1}
        with pytest.raises(MalformedInputError):
            loaders.load_decomposition(path5, write_json("d.json", data))

    def test_decomposition_needs_scale(self, write_json, path5):
        with pytest.raises(MalformedInputError):
            loaders.load_decomposition(path5, write_json("d.json", {"elements": [list(path5.labels)], "families": [[0]]}))


class TestMaps:
    def test_real_map(self, write_json, path5):
        data = {"domain": ["0", "4"], "values": {"0": 0, "4": "4"}, "lambda": "3/2"}
        f = loaders.load_map(path5, write_json("m.json", data))
        assert f.target.kind == TargetKind.REAL
        assert f.domain == (0, 4)
        assert f.values == (0, 4)
        assert f.lam == Fraction(3, 2)

    def test_simplex_map(self, write_json, path5):
        data = {
            "domain": ["1"],
            "target": {"kind": "simplex", "coords": 2},
            "values": {"1": ["1/3", "2/3"]},
        }
        f = loaders.load_map(path5, write_json("m.json", data))
        assert f.values == ((Fraction(1, 3), Fraction(2, 3)),)
        assert f.lam is None

    def test_missing_values(self, write_json, path5):
        with pytest.raises(MalformedInputError) as error:
            loaders.load_map(path5, write_json("m.json", {"domain": ["0", "1"], "values": {"0": 1}}))
        assert error.value.details["points"] == ["1"]

    def test_unknown_label(self, write_json, path5):
        with pytest.raises(MalformedInputError):
            loaders.load_map(path5, write_json("m.json", {"domain": ["z"], "values": {"z": 1}}))


def test_file_digest(tmp_path):
    path = tmp_path / "data.bin"
    path.write_bytes(b"nagata")
    assert loaders.file_digest(path) == hashlib.sha256(b"nagata").hexdigest()
