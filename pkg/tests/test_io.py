import json

import numpy as np
import pytest

from adbinterp import fit_classifier, fit_regression, make_example_set
from adbinterp import io as adbio
from adbinterp.errors import (
    CorruptFile,
    DimensionMismatch,
    EmptyFile,
    ParseError,
    SchemaVersionMismatch,
    UnknownFunction,
)


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


class TestReadCsv:
    def test_numeric(self, tmp_path):
        ds = adbio.read_csv(write(tmp_path, "a.csv", "x,y,z\n-20,-20,-800\n"))
        assert ds.dimension == 2 and ds.kind == "numeric"
        assert ds.points.tolist() == [[-20, -20]] and ds.targets.tolist() == [-800]
        assert ds.names == ("x", "y") and ds.target_name == "z"

    def test_labeled(self, tmp_path):
        ds = adbio.read_csv(write(tmp_path, "a.csv", "x1,x2,label\n0.5,0.5,A\n"), labeled=True)
        assert ds.kind == "labeled" and ds.targets == ("A",)

    def test_parse_error_carries_position(self, tmp_path):
        path = write(tmp_path, "a.csv", "x,y,z\n1,2,3\n1,oops,3\n")
        with pytest.raises(ParseError) as err:
            adbio.read_csv(path)
        assert (err.value.line, err.value.column) == (3, 2)
        assert "line 3" in str(err.value)

    def test_ragged_row(self, tmp_path):
        with pytest.raises(DimensionMismatch):
            adbio.read_csv(write(tmp_path, "a.csv", "x,y,z\n1,2,3\n1,2\n"))

    @pytest.mark.parametrize("text", ["", "x,y,z\n", "x,y,z\n\n"])
    def test_empty(self, tmp_path, text):
        with pytest.raises(EmptyFile):
            adbio.read_csv(write(tmp_path, "a.csv", text))

    def test_non_finite_rejected(self, tmp_path):
        with pytest.raises(ParseError):
            adbio.read_csv(write(tmp_path, "a.csv", "x,z\nnan,1\n"))

    def test_round_trip(self, tmp_path):
        ds = adbio.generate("peaks", ["-3:3/7", "-3:3/5"])
        path = tmp_path / "p.csv"
        adbio.write_csv(ds, path)
        back = adbio.read_csv(path)
        assert back.points.tobytes() == ds.points.tobytes()
        assert back.targets.tobytes() == ds.targets.tobytes()
        assert back.names == ds.names and back.target_name == ds.target_name

    def test_labeled_round_trip(self, tmp_path):
        ds = adbio.Dataset(np.array([[0.1, 0.2], [0.3, 0.4]]), ("A", "B"), "labeled", ("u", "v"), "cls")
        adbio.write_csv(ds, tmp_path / "l.csv")
        back = adbio.read_csv(tmp_path / "l.csv", labeled=True)
        assert back.targets == ds.targets and back.points.tolist() == ds.points.tolist()

    def test_points_csv(self, tmp_path):
        pts, header = adbio.read_points_csv(write(tmp_path, "q.csv", "x,y\n"), 2)
        assert pts.shape == (0, 2) and header == ("x", "y")
        with pytest.raises(DimensionMismatch):
            adbio.read_points_csv(write(tmp_path, "q.csv", "x\n1\n"), 2)


class TestModelFiles:
    def test_grid_round_trip_is_bit_exact(self, tmp_path, bowl_model):
        path = tmp_path / "m.json"
        adbio.write_model(bowl_model, path)
        back = adbio.read_model(path)
        assert back.grid.values.tobytes() == bowl_model.grid.values.tobytes()
        assert back.grid.values.size == 441
        assert all(a.tobytes() == b.tobytes() for a, b in zip(back.grid.axes, bowl_model.grid.axes))

    def test_awkward_reals_survive(self, tmp_path):
        rng = np.random.default_rng(0)
        axes = [np.sort(rng.uniform(-1, 1, 4)), np.cumsum(rng.uniform(1e-9, 1e9, 3))]
        pts = adbio.cartesian(axes)
        model = fit_regression(pts, rng.standard_normal(len(pts)) * 1e-300)
        adbio.write_model(model, tmp_path / "m.json")
        back = adbio.read_model(tmp_path / "m.json")
        assert back.grid.values.tobytes() == model.grid.values.tobytes()

    def test_classifier_round_trip(self, tmp_path):
        ex = make_example_set([[0.1, 0.2], [1.0 / 3, 2.0]], ["A", "B"], radii=[[0.1, 0.2], [0.3, 0.4]])
        adbio.write_model(fit_classifier(ex), tmp_path / "c.json")
        back = adbio.read_model(tmp_path / "c.json").examples
        assert back.points.tobytes() == ex.points.tobytes()
        assert back.left.tobytes() == ex.left.tobytes()
        assert back.right.tobytes() == ex.right.tobytes()
        assert back.labels == ("A", "B")

    def test_integer_labels(self, tmp_path):
        ex = make_example_set([[0.0], [1.0]], np.array([3, 4]), radii=0.5)
        adbio.write_model(fit_classifier(ex), tmp_path / "c.json")
        assert adbio.read_model(tmp_path / "c.json").examples.labels == (3, 4)

    def test_truncated(self, tmp_path, bowl_model):
        path = tmp_path / "m.json"
        adbio.write_model(bowl_model, path)
        text = path.read_text()
        path.write_text(text[: len(text) // 2])
        with pytest.raises(CorruptFile):
            adbio.read_model(path)

    def test_newer_major_version(self, tmp_path, bowl_model):
        doc = adbio.model_to_dict(bowl_model)
        doc["version"] = "2.0"
        (tmp_path / "m.json").write_text(json.dumps(doc))
        with pytest.raises(SchemaVersionMismatch):
            adbio.read_model(tmp_path / "m.json")

    def test_minor_version_accepted(self, tmp_path, bowl_model):
        doc = adbio.model_to_dict(bowl_model)
        doc["version"] = "1.7"
        (tmp_path / "m.json").write_text(json.dumps(doc))
        assert adbio.read_model(tmp_path / "m.json").grid.shape == (21, 21)

    @pytest.mark.parametrize("mutate", [
        lambda d: d.pop("values"),
        lambda d: d.__setitem__("values", d["values"][:-1]),
        lambda d: d.__setitem__("kind", "spline"),
        lambda d: d.__setitem__("format", "other"),
    ])
    def test_structurally_bad(self, tmp_path, bowl_model, mutate):
        doc = adbio.model_to_dict(bowl_model)
        mutate(doc)
        (tmp_path / "m.json").write_text(json.dumps(doc))
        with pytest.raises(CorruptFile):
            adbio.read_model(tmp_path / "m.json")


class TestGenerate:
    def test_bowl(self):
        ds = adbio.generate("neg_sum_squares", ["-20:20:2", "-20:20:2"])
        assert len(ds) == 441
        assert ds.points[0].tolist() == [-20, -20] and ds.targets[0] == -800
        assert ds.points[1].tolist() == [-20, -18] and ds.targets[1] == -724

    def test_affine(self):
        ds = adbio.generate("affine", [[0, 1, 2]], coefficients=(1, 3))
        assert ds.targets.tolist() == [1, 4, 7]

    def test_exp3_origin(self):
        assert adbio.exp3(np.zeros((1, 3)))[0] == 0.0

    def test_exp3_formula(self):
        p = np.array([[0.5, -1.0, 1.5]])
        assert adbio.exp3(p)[0] == pytest.approx(1.5 * np.exp(-0.125 + 1.0 - 3.375))

    def test_peaks_known_value(self):
        # closed form at the origin: 3e^-1 - e^-1/3
        assert adbio.peaks(np.zeros((1, 2)))[0] == pytest.approx(3 * np.exp(-1) - np.exp(-1) / 3)

    def test_unknown(self):
        with pytest.raises(UnknownFunction):
            adbio.generate("sinc", ["0:1:1"])

    def test_wrong_dimension(self):
        with pytest.raises(DimensionMismatch):
            adbio.generate("exp3", ["0:1:1"])

    def test_deterministic(self):
        a = adbio.generate("exp3", ["-2:2/5"] * 3)
        b = adbio.generate("exp3", ["-2:2/5"] * 3)
        assert a.targets.tobytes() == b.targets.tobytes()


@pytest.mark.parametrize("spec,expected", [
    ("-20:20:10", [-20, -10, 0, 10, 20]),
    ("0:1/3", [0, 0.5, 1]),
    ("3,1.5,7", [3, 1.5, 7]),
])
def test_parse_axis_spec(spec, expected):
    assert adbio.parse_axis_spec(spec).tolist() == expected


@pytest.mark.parametrize("spec", ["0:1:0.3", "1:0:1", "a:b:c", ""])
def test_parse_axis_spec_errors(spec):
    with pytest.raises(ParseError):
        adbio.parse_axis_spec(spec)
