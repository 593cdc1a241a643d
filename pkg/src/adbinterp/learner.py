"""Instance-based regression and classification on top of ADB interpolation.

Regression stores regularly distributed examples as a grid and answers
queries by ADB interpolation.  Classification stores scattered labelled
points, each owning a strict approximation box, and answers with the label
of the box-containing example of highest degree, or declines to answer when
no box contains the query.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Hashable, Sequence, Union

import numpy as np

from .errors import (
    DuplicatePoint,
    GridError,
    IncompleteGrid,
    InconsistentDimension,
    InvalidRadii,
)
from .grid import RegularGrid, default_names
from .interp import interpolate, interpolate_many


@dataclass(frozen=True)
class Regression:
    value: float


@dataclass(frozen=True)
class Classified:
    label: Hashable
    degree: float
    example_index: int
    # other examples at the same degree carrying a different label
    ties: tuple[int, ...] = ()


@dataclass(frozen=True)
class Unclassified:
    pass


UNCLASSIFIED = Unclassified()
Prediction = Union[Regression, Classified, Unclassified]


# -- regression -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class RegressionModel:
    grid: RegularGrid

    @property
    def ndim(self) -> int:
        return self.grid.ndim


def fit_regression(points, values, names: Sequence[str] | None = None) -> RegressionModel:
    """Arrange scattered ``(point, value)`` examples into a grid model.

    The points must cover the Cartesian product of their distinct per-axis
    coordinates exactly once each.

    Raises
    ------
    InconsistentDimension
        Ragged points or a value count that does not match.
    DuplicatePoint
        The same point appears twice.
    IncompleteGrid
        Some combination of per-axis coordinates is missing.
    """
    try:
        pts = np.asarray(points, dtype=np.float64)
    except ValueError as exc:
        raise InconsistentDimension(f"points do not share one dimension: {exc}") from None
    vals = np.asarray(values, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts.reshape(-1, 1)
    if pts.ndim != 2 or pts.shape[1] == 0:
        raise InconsistentDimension(f"points must form an (m, n) array, got shape {pts.shape}")
    if vals.shape != (pts.shape[0],):
        raise InconsistentDimension(f"{vals.size} values for {pts.shape[0]} points")
    if not np.all(np.isfinite(pts)):
        raise GridError("example coordinates must be finite")

    axes = [np.unique(pts[:, j]) for j in range(pts.shape[1])]
    shape = tuple(a.size for a in axes)
    idx = np.stack([np.searchsorted(a, pts[:, j]) for j, a in enumerate(axes)], axis=1)
    flat = np.ravel_multi_index(tuple(idx.T), shape)
    counts = np.bincount(flat, minlength=int(np.prod(shape)))
    if np.any(counts > 1):
        dup = int(np.flatnonzero(counts > 1)[0])
        where = tuple(float(a[i]) for a, i in zip(axes, np.unravel_index(dup, shape)))
        raise DuplicatePoint(f"point {where} appears {counts[dup]} times")
    if np.any(counts == 0):
        missing = int(np.flatnonzero(counts == 0)[0])
        where = tuple(float(a[i]) for a, i in zip(axes, np.unravel_index(missing, shape)))
        raise IncompleteGrid(
            f"{int(np.sum(counts == 0))} grid points missing, e.g. {where}")

    tensor = np.empty(shape)
    tensor.reshape(-1)[flat] = vals
    return RegressionModel(RegularGrid(tuple(axes), tensor, tuple(names or ())))


def predict_regression(model: RegressionModel, query: Sequence[float]) -> Regression:
    return Regression(interpolate(model.grid, query))


def predict_regression_many(model: RegressionModel, queries, threads: int = 1) -> np.ndarray:
    """Batch regression; out-of-domain rows come back as NaN."""
    return interpolate_many(model.grid, queries, threads=threads, out_of_domain="nan")


# -- classification ---------------------------------------------------------

@dataclass(frozen=True, eq=False)
class LabeledExampleSet:
    """Labelled points with per-example left/right radii on every axis.

    Example ``k``'s strict approximation region is the box
    ``prod_j [points[k, j] - left[k, j], points[k, j] + right[k, j]]``.
    """

    points: np.ndarray
    labels: tuple[Any, ...]
    left: np.ndarray
    right: np.ndarray
    names: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        try:
            pts = np.array(self.points, dtype=np.float64)
        except ValueError as exc:
            raise InconsistentDimension(f"points do not share one dimension: {exc}") from None
        if pts.ndim != 2 or pts.shape[0] == 0 or pts.shape[1] == 0:
            raise InconsistentDimension(f"points must form a nonempty (m, n) array, got {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise InconsistentDimension("example coordinates must be finite")
        labels = tuple(self.labels)
        if len(labels) != pts.shape[0]:
            raise InconsistentDimension(f"{len(labels)} labels for {pts.shape[0]} points")
        left = np.array(self.left, dtype=np.float64)
        right = np.array(self.right, dtype=np.float64)
        for r in (left, right):
            if r.shape != pts.shape:
                raise InvalidRadii(f"radii shape {r.shape} does not match points {pts.shape}")
            if not np.all(np.isfinite(r)) or not np.all(r > 0):
                raise InvalidRadii("all approximation radii must be positive and finite")
        names = tuple(self.names) or default_names(pts.shape[1])
        if len(names) != pts.shape[1]:
            raise InconsistentDimension(f"{len(names)} names for {pts.shape[1]} axes")
        for a in (pts, left, right):
            a.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)
        object.__setattr__(self, "names", tuple(str(n) for n in names))

    @property
    def ndim(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.points.shape[0]


def default_radii(points) -> np.ndarray:
    """Half the median nearest-neighbour spacing of distinct coordinates, per axis.

    A heuristic only.  An axis on which every example shares one coordinate
    falls back to 0.5.
    """
    pts = np.asarray(points, dtype=np.float64)
    out = np.empty(pts.shape[1])
    for j in range(pts.shape[1]):
        u = np.unique(pts[:, j])
        if u.size < 2:
            out[j] = 0.5
            continue
        gaps = np.diff(u)
        nn = np.minimum(np.r_[np.inf, gaps], np.r_[gaps, np.inf])
        out[j] = float(np.median(nn)) / 2
    return out


def make_example_set(
    points,
    labels: Sequence[Any],
    radii=None,
    names: Sequence[str] | None = None,
) -> LabeledExampleSet:
    """Build a :class:`LabeledExampleSet` from a compact radii spec.

    ``radii`` may be ``None`` (use :func:`default_radii`), a scalar, an
    ``(n,)`` array of symmetric per-axis radii, an ``(n, 2)`` array of
    per-axis ``(left, right)`` pairs, or an ``(m, n, 2)`` per-example array.
    """
    try:
        pts = np.asarray(points, dtype=np.float64)
    except ValueError as exc:
        raise InconsistentDimension(f"points do not share one dimension: {exc}") from None
    if pts.ndim == 1:
        pts = pts.reshape(-1, 1)
    if pts.ndim != 2:
        raise InconsistentDimension(f"points must form an (m, n) array, got {pts.shape}")
    m, n = pts.shape
    if radii is None:
        r = default_radii(pts) if m else np.ones(n)
        left = right = np.broadcast_to(r, (m, n))
    else:
        r = np.asarray(radii, dtype=np.float64)
        if r.ndim == 0 or r.shape == (n,):
            left = right = np.broadcast_to(r, (m, n))
        elif r.shape == (n, 2):
            left, right = np.broadcast_to(r[:, 0], (m, n)), np.broadcast_to(r[:, 1], (m, n))
        elif r.shape == (m, n, 2):
            left, right = r[..., 0], r[..., 1]
        else:
            raise InvalidRadii(f"cannot interpret radii of shape {r.shape} for {m} points in {n}-D")
    return LabeledExampleSet(pts, tuple(labels), left, right, tuple(names or ()))


@dataclass(frozen=True, eq=False)
class ClassifierModel:
    examples: LabeledExampleSet
    low: np.ndarray = field(init=False, repr=False)
    high: np.ndarray = field(init=False, repr=False)
    codes: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        ex = self.examples
        low, high = ex.points - ex.left, ex.points + ex.right
        _, codes = np.unique(np.array([repr(l) for l in ex.labels]), return_inverse=True)
        for a in (low, high, codes):
            a.setflags(write=False)
        object.__setattr__(self, "low", low)
        object.__setattr__(self, "high", high)
        object.__setattr__(self, "codes", codes)

    @property
    def ndim(self) -> int:
        return self.examples.ndim


def fit_classifier(examples: LabeledExampleSet) -> ClassifierModel:
    return ClassifierModel(examples)


# bound on (queries x examples x axes) cells materialised per block
_BLOCK_CELLS = 1 << 21


def _classify_block(model: ClassifierModel, queries: np.ndarray):
    # Linear scan over all examples.  Returns the winner index per row (-1 when
    # no box contains the query), its degree, and a mask of conflicting ties.
    p, lo, hi = model.examples.points, model.low, model.high
    q = queries[:, None, :]
    inside = np.all((q >= lo) & (q <= hi), axis=2)
    with np.errstate(invalid="ignore", divide="ignore"):
        deg = np.where(q == p, 1.0, np.where(q < p, (q - lo) / (p - lo), (q - hi) / (p - hi)))
    vec = np.where(inside, deg.min(axis=2), -np.inf)
    best = np.argmax(vec, axis=1)
    best_deg = vec[np.arange(len(queries)), best]
    found = np.isfinite(best_deg)
    ties = found[:, None] & (vec == best_deg[:, None]) & (model.codes != model.codes[best][:, None])
    return np.where(found, best, -1), best_deg, ties


def _check_queries(model: ClassifierModel, queries) -> np.ndarray:
    q = np.asarray(queries, dtype=np.float64)
    if q.ndim == 1:
        q = q.reshape(-1, model.ndim)
    if q.shape[1] != model.ndim:
        raise InconsistentDimension(f"queries have {q.shape[1]} columns, model has {model.ndim}")
    return q


def _predictions(model: ClassifierModel, best, degree, ties) -> list[Prediction]:
    labels = model.examples.labels
    out: list[Prediction] = []
    for k, d, t in zip(best.tolist(), degree.tolist(), ties):
        if k < 0:
            out.append(UNCLASSIFIED)
        else:
            out.append(Classified(labels[k], d, k, tuple(np.flatnonzero(t).tolist())))
    return out


def classify(model: ClassifierModel, query: Sequence[float]) -> Prediction:
    """Label of the highest-degree example whose box contains ``query``.

    Equal degrees resolve to the lowest example index; conflicting labels at
    that degree are listed in ``Classified.ties``.
    """
    q = _check_queries(model, [query])
    return _predictions(model, *_classify_block(model, q))[0]


def classify_many(model: ClassifierModel, queries, threads: int = 1) -> list[Prediction]:
    """Classify every row of ``queries``; order is preserved."""
    q = _check_queries(model, queries)
    if q.shape[0] == 0:
        return []
    rows = max(1, _BLOCK_CELLS // max(1, len(model.examples) * model.ndim))
    starts = list(range(0, q.shape[0], rows))

    def run(s: int) -> list[Prediction]:
        return _predictions(model, *_classify_block(model, q[s:s + rows]))

    if threads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run, starts))
    else:
        parts = [run(s) for s in starts]
    return [p for part in parts for p in part]
