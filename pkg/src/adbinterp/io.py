"""Datasets, CSV ingestion, model files and test-function generators.

Model file format
-----------------
A model is stored as a UTF-8 JSON document::

    {
      "format": "adb-model",
      "version": "1.0",
      "kind": "grid" | "classifier",
      "names": [...],                       # one per axis
      # kind == "grid"
      "axes": [[...], ...],                 # node coordinates per axis
      "shape": [...],
      "values": [...],                      # tensor, row-major (C order)
      # kind == "classifier"
      "points": [[...], ...],
      "labels": [...],                      # strings or integers
      "left": [[...], ...], "right": [[...], ...]
    }

Reals are written as shortest round-trip decimals (Python ``repr``), so a
reload reproduces every stored float bit for bit.  Readers accept any
``1.x`` version and reject other major versions.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Sequence, Union

import numpy as np

from .errors import (
    CorruptFile,
    DimensionMismatch,
    EmptyFile,
    ParseError,
    SchemaVersionMismatch,
    UnknownFunction,
    UsageError,
)
from .grid import RegularGrid, default_names
from .learner import ClassifierModel, LabeledExampleSet, RegressionModel

FORMAT_NAME = "adb-model"
FORMAT_VERSION = "1.0"

Model = Union[RegressionModel, ClassifierModel]


@dataclass(frozen=True, eq=False)
class Dataset:
    """Rows of ``dimension`` real features plus one target.

    ``targets`` is a float array for numeric data and a tuple of strings for
    labelled data.
    """

    points: np.ndarray
    targets: Any
    kind: str = "numeric"
    names: tuple[str, ...] = ()
    target_name: str = "value"

    @property
    def dimension(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.points.shape[0]

    def rows(self):
        for p, t in zip(self.points.tolist(), self.targets):
            yield tuple(p), t


# -- CSV --------------------------------------------------------------------

def _parse_float(text: str, line: int, column: int) -> float:
    try:
        v = float(text)
    except ValueError:
        raise ParseError(f"not a number: {text!r}", line, column) from None
    if not math.isfinite(v):
        raise ParseError(f"non-finite value {text!r}", line, column)
    return v


def read_points_csv(path: str | Path, dimension: int | None = None) -> tuple[np.ndarray, tuple[str, ...]]:
    """Read a header plus rows of real features (no target column).

    An empty body yields a ``(0, n)`` array; a missing header is an error.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise EmptyFile(f"{path}: no header row")
        header = [h.strip() for h in header]
        n = len(header)
        if dimension is not None and n != dimension:
            raise DimensionMismatch(f"{path}: {n} columns, expected {dimension}", 1)
        rows = []
        for line_no, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != n:
                raise DimensionMismatch(f"expected {n} fields, got {len(row)}", line_no)
            rows.append([_parse_float(c, line_no, j + 1) for j, c in enumerate(row)])
    pts = np.array(rows, dtype=np.float64).reshape(-1, n)
    return pts, tuple(header)


def read_csv(path: str | Path, labeled: bool = False) -> Dataset:
    """Read ``n`` feature columns followed by one target column.

    The target is parsed as a real unless ``labeled`` is set, in which case
    it is kept as a string.

    Raises
    ------
    EmptyFile
        No header, or a header but no data rows.
    DimensionMismatch
        A row whose field count differs from the header.
    ParseError
        A field that is not a finite real; carries the 1-based line and
        column.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or not any(h.strip() for h in header):
            raise EmptyFile(f"{path}: no header row")
        header = [h.strip() for h in header]
        if len(header) < 2:
            raise DimensionMismatch("need at least one feature column and a target column", 1)
        n = len(header) - 1
        points, targets = [], []
        for line_no, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != n + 1:
                raise DimensionMismatch(f"expected {n + 1} fields, got {len(row)}", line_no)
            points.append([_parse_float(c, line_no, j + 1) for j, c in enumerate(row[:n])])
            if labeled:
                label = row[n].strip()
                if not label:
                    raise ParseError("empty label", line_no, n + 1)
                targets.append(label)
            else:
                targets.append(_parse_float(row[n], line_no, n + 1))
    if not points:
        raise EmptyFile(f"{path}: no data rows")
    pts = np.array(points, dtype=np.float64)
    if labeled:
        return Dataset(pts, tuple(targets), "labeled", tuple(header[:n]), header[n])
    return Dataset(pts, np.array(targets, dtype=np.float64), "numeric", tuple(header[:n]), header[n])


def format_real(v: float) -> str:
    return repr(float(v))


def write_csv(dataset: Dataset, path: str | Path) -> None:
    """Write ``dataset`` so that :func:`read_csv` restores it exactly."""
    names = dataset.names or default_names(dataset.dimension)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([*names, dataset.target_name])
        for p, t in dataset.rows():
            target = t if dataset.kind == "labeled" else format_real(t)
            w.writerow([*(format_real(x) for x in p), target])


# -- model files ------------------------------------------------------------

def model_to_dict(model: Model) -> dict:
    if isinstance(model, RegressionModel):
        g = model.grid
        return {
            "format": FORMAT_NAME,
            "version": FORMAT_VERSION,
            "kind": "grid",
            "names": list(g.names),
            "axes": [a.tolist() for a in g.axes],
            "shape": list(g.shape),
            "values": g.values.reshape(-1).tolist(),
        }
    if isinstance(model, ClassifierModel):
        ex = model.examples
        return {
            "format": FORMAT_NAME,
            "version": FORMAT_VERSION,
            "kind": "classifier",
            "names": list(ex.names),
            "points": ex.points.tolist(),
            "labels": [l.item() if isinstance(l, np.generic) else l for l in ex.labels],
            "left": ex.left.tolist(),
            "right": ex.right.tolist(),
        }
    raise TypeError(f"cannot serialise {type(model).__name__}")


def model_from_dict(doc: Any) -> Model:
    if not isinstance(doc, dict) or doc.get("format") != FORMAT_NAME:
        raise CorruptFile("not an adb-model document")
    version = str(doc.get("version", ""))
    major = version.split(".")[0]
    if major != FORMAT_VERSION.split(".")[0]:
        raise SchemaVersionMismatch(
            f"model format version {version!r} is not readable (supported: {FORMAT_VERSION})")
    kind = doc.get("kind")
    try:
        names = tuple(doc["names"])
        if kind == "grid":
            shape = tuple(int(s) for s in doc["shape"])
            values = np.array(doc["values"], dtype=np.float64)
            if values.size != int(np.prod(shape)):
                raise CorruptFile(f"{values.size} values for shape {shape}")
            axes = tuple(np.array(a, dtype=np.float64) for a in doc["axes"])
            return RegressionModel(RegularGrid(axes, values.reshape(shape), names))
        if kind == "classifier":
            ex = LabeledExampleSet(doc["points"], doc["labels"], doc["left"], doc["right"], names)
            return ClassifierModel(ex)
    except CorruptFile:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptFile(f"invalid {kind} model: {exc}") from None
    raise CorruptFile(f"unknown model kind {kind!r}")


def write_model(model: Model, path: str | Path) -> None:
    doc = model_to_dict(model)
    Path(path).write_text(json.dumps(doc, allow_nan=False) + "\n", encoding="utf-8")


def read_model(path: str | Path) -> Model:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise CorruptFile(f"{path}: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CorruptFile(f"{path}: {exc}") from None
    return model_from_dict(doc)


# -- generators -------------------------------------------------------------

def neg_sum_squares(p: np.ndarray) -> np.ndarray:
    return -np.sum(p * p, axis=1)


def exp3(p: np.ndarray) -> np.ndarray:
    # u = z * exp(-x^3 - y^3 - z^3), cubes as printed
    x, y, z = p[:, 0], p[:, 1], p[:, 2]
    return z * np.exp(-x ** 3 - y ** 3 - z ** 3)


def peaks(p: np.ndarray) -> np.ndarray:
    x, y = p[:, 0], p[:, 1]
    return (3 * (1 - x) ** 2 * np.exp(-x ** 2 - (y + 1) ** 2)
            - 10 * (x / 5 - x ** 3 - y ** 5) * np.exp(-x ** 2 - y ** 2)
            - np.exp(-(x + 1) ** 2 - y ** 2) / 3)


def affine(coefficients: Sequence[float]) -> Callable[[np.ndarray], np.ndarray]:
    """``c0 + c1*x1 + ... + cn*xn`` from ``coefficients = (c0, c1, ..., cn)``."""
    c = np.asarray(coefficients, dtype=np.float64)

    def f(p: np.ndarray) -> np.ndarray:
        if p.shape[1] != c.size - 1:
            raise DimensionMismatch(f"affine has {c.size - 1} slopes, points have {p.shape[1]} axes")
        out = np.full(p.shape[0], c[0])
        for j in range(p.shape[1]):
            out = out + c[j + 1] * p[:, j]
        return out

    return f


@dataclass(frozen=True)
class SampleFunction:
    name: str
    dimension: int | None          # None: any dimension
    default_domain: tuple[float, float]
    target_name: str


FUNCTIONS = {
    "neg_sum_squares": SampleFunction("neg_sum_squares", None, (-20.0, 20.0), "z"),
    "exp3": SampleFunction("exp3", 3, (-2.0, 2.0), "u"),
    "peaks": SampleFunction("peaks", 2, (-3.0, 3.0), "z"),
    "affine": SampleFunction("affine", None, (0.0, 1.0), "value"),
}


def get_function(name: str, coefficients: Sequence[float] | None = None) -> Callable[[np.ndarray], np.ndarray]:
    if name not in FUNCTIONS:
        raise UnknownFunction(f"unknown function {name!r}; known: {', '.join(FUNCTIONS)}")
    if name == "affine":
        if coefficients is None:
            raise UsageError("affine needs coefficients (c0, c1, ..., cn)")
        return affine(coefficients)
    return {"neg_sum_squares": neg_sum_squares, "exp3": exp3, "peaks": peaks}[name]


def parse_axis_spec(spec: str) -> np.ndarray:
    """Parse ``start:stop:step`` (stop inclusive) or ``start:stop/count``.

    A comma-separated list of explicit coordinates is also accepted.
    """
    spec = spec.strip()
    try:
        if "/" in spec:
            bounds, count = spec.rsplit("/", 1)
            start, stop = (float(s) for s in bounds.split(":"))
            nodes = np.linspace(start, stop, int(count))
        elif ":" in spec:
            start, stop, step = (float(s) for s in spec.split(":"))
            if step <= 0 or stop < start:
                raise ValueError("need start <= stop and step > 0")
            count = (stop - start) / step
            if abs(count - round(count)) > 1e-9 * max(1.0, count):
                raise ValueError(f"step {step} does not divide [{start}, {stop}]")
            nodes = np.linspace(start, stop, int(round(count)) + 1)
        else:
            nodes = np.array([float(s) for s in spec.split(",")])
    except ValueError as exc:
        raise ParseError(f"bad axis spec {spec!r}: {exc}") from None
    if nodes.size == 0 or not np.all(np.isfinite(nodes)):
        raise ParseError(f"bad axis spec {spec!r}")
    return nodes


def cartesian(axes: Sequence[np.ndarray]) -> np.ndarray:
    """Row-major Cartesian product of ``axes`` as an ``(m, n)`` array."""
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.reshape(-1) for m in mesh], axis=1)


def generate(
    function_id: str,
    axes: Sequence[np.ndarray | str],
    coefficients: Sequence[float] | None = None,
) -> Dataset:
    """Sample a named test function on the Cartesian product of ``axes``."""
    f = get_function(function_id, coefficients)
    info = FUNCTIONS[function_id]
    axes = [parse_axis_spec(a) if isinstance(a, str) else np.asarray(a, dtype=np.float64)
            for a in axes]
    if info.dimension is not None and len(axes) != info.dimension:
        raise DimensionMismatch(f"{function_id} is {info.dimension}-D, got {len(axes)} axes")
    pts = cartesian(axes)
    return Dataset(pts, f(pts), "numeric", default_names(len(axes)), info.target_name)
