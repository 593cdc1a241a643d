"""Regular grids of base points and nearest-node lookup.

Each axis is a strictly increasing array of node coordinates.  Node ``i``
owns the approximation region spanning its two neighbours; the first and
last node get one-sided regions.  Within ``[nodes[i], nodes[i+1]]`` the
degrees to the two bracketing nodes sum to one, so the nearest node always
has degree >= 0.5.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .approx import ApproximationRegion, approximation_degree, vector_degree
from .errors import GridError, IndexOutOfRange, InconsistentDimension, OutOfDomain

GridIndex = tuple[int, ...]


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.float64, copy=True)
    a.setflags(write=False)
    return a


def validate_axis(nodes: Sequence[float]) -> np.ndarray:
    nodes = np.asarray(nodes, dtype=np.float64)
    if nodes.ndim != 1:
        raise GridError("axis nodes must be one-dimensional")
    if nodes.size < 2:
        raise GridError(f"an axis needs at least 2 nodes, got {nodes.size}")
    if not np.all(np.isfinite(nodes)):
        raise GridError("axis nodes must be finite")
    if not np.all(np.diff(nodes) > 0):
        raise GridError("axis nodes must be strictly increasing")
    return nodes


@dataclass(frozen=True, eq=False)
class RegularGrid:
    """Dense tensor of function values over the Cartesian product of axes.

    ``values[i, j, ..., s]`` is the sample at
    ``(axes[0][i], axes[1][j], ..., axes[n-1][s])``.  Arrays are copied and
    made read-only on construction.
    """

    axes: tuple[np.ndarray, ...]
    values: np.ndarray
    names: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        if len(self.axes) == 0:
            raise GridError("a grid needs at least one axis")
        axes = tuple(_freeze(validate_axis(a)) for a in self.axes)
        values = np.asarray(self.values, dtype=np.float64)
        shape = tuple(a.size for a in axes)
        if values.shape != shape:
            raise InconsistentDimension(
                f"values have shape {values.shape}, axes imply {shape}")
        if not np.all(np.isfinite(values)):
            raise GridError("grid values must be finite")
        names = tuple(self.names) or default_names(len(axes))
        if len(names) != len(axes):
            raise InconsistentDimension(f"{len(names)} names for {len(axes)} axes")
        object.__setattr__(self, "axes", axes)
        object.__setattr__(self, "values", _freeze(values))
        object.__setattr__(self, "names", tuple(str(n) for n in names))

    @property
    def ndim(self) -> int:
        return len(self.axes)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.values.shape

    @property
    def bounds(self) -> list[tuple[float, float]]:
        return [(float(a[0]), float(a[-1])) for a in self.axes]

    def node(self, idx: GridIndex) -> tuple[float, ...]:
        return tuple(float(a[i]) for a, i in zip(self.axes, idx))

    def value_at(self, idx: GridIndex) -> float:
        return float(self.values[tuple(idx)])

    def contains(self, query: Sequence[float]) -> bool:
        return len(query) == self.ndim and all(
            a[0] <= q <= a[-1] for a, q in zip(self.axes, query))


def default_names(n: int) -> tuple[str, ...]:
    if n <= 3:
        return ("x", "y", "z")[:n]
    return tuple(f"x{k + 1}" for k in range(n))


def node_region(grid: RegularGrid, axis: int, i: int) -> ApproximationRegion:
    """Approximation region of node ``i`` on ``axis``."""
    if not 0 <= axis < grid.ndim:
        raise IndexOutOfRange(f"axis {axis} out of range for {grid.ndim}-D grid")
    nodes = grid.axes[axis]
    m = nodes.size
    if not 0 <= i < m:
        raise IndexOutOfRange(f"node {i} out of range for axis of {m} nodes")
    low = nodes[i - 1] if i > 0 else nodes[i]
    high = nodes[i + 1] if i < m - 1 else nodes[i]
    return ApproximationRegion.from_bounds(float(low), float(nodes[i]), float(high))


def check_query(grid: RegularGrid, query: Sequence[float]) -> tuple[float, ...]:
    query = tuple(float(q) for q in query)
    if len(query) != grid.ndim:
        raise InconsistentDimension(
            f"query has {len(query)} components, grid has {grid.ndim} axes")
    for k, (q, (lo, hi)) in enumerate(zip(query, grid.bounds)):
        if not lo <= q <= hi:
            raise OutOfDomain(f"component {k} = {q!r} outside [{lo!r}, {hi!r}]")
    return query


def nearest_node(grid: RegularGrid, query: Sequence[float]) -> tuple[GridIndex, float]:
    """Grid index of highest vector degree to ``query``, and that degree.

    Only the two nodes bracketing each component can have positive degree,
    and under the min combination the best index is the per-axis best.
    Exact midpoints go to the lower index.
    """
    query = check_query(grid, query)
    idx: list[int] = []
    degrees: list[float] = []
    for axis, q in enumerate(query):
        nodes = grid.axes[axis]
        i = min(max(bisect.bisect_right(nodes, q) - 1, 0), nodes.size - 2)
        d_lo = approximation_degree(node_region(grid, axis, i), q)
        d_hi = approximation_degree(node_region(grid, axis, i + 1), q)
        if d_hi > d_lo:
            idx.append(i + 1)
            degrees.append(d_hi)
        else:
            idx.append(i)
            degrees.append(d_lo)
    return tuple(idx), vector_degree(degrees)


def nearest_nodes(grid: RegularGrid, queries: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised ``nearest_node`` over the rows of ``queries``.

    Rows must already be in-domain.  Returns an ``(m, n)`` integer index
    array and an ``(m,)`` degree array; results match the scalar routine
    bit for bit.
    """
    queries = np.asarray(queries, dtype=np.float64)
    m, n = queries.shape
    idx = np.empty((m, n), dtype=np.intp)
    degree = np.ones(m)
    for axis in range(n):
        nodes = grid.axes[axis]
        q = queries[:, axis]
        i = np.clip(np.searchsorted(nodes, q, side="right") - 1, 0, nodes.size - 2)
        lo, hi = nodes[i], nodes[i + 1]
        d_lo = (q - hi) / (lo - hi)
        d_hi = (q - lo) / (hi - lo)
        pick_hi = d_hi > d_lo
        idx[:, axis] = i + pick_hi
        degree = np.minimum(degree, np.where(pick_hi, d_hi, d_lo))
    return idx, degree


def in_domain(grid: RegularGrid, queries: np.ndarray) -> np.ndarray:
    """Boolean mask of rows lying inside the grid's bounding box."""
    queries = np.asarray(queries, dtype=np.float64)
    ok = np.ones(queries.shape[0], dtype=bool)
    for axis, nodes in enumerate(grid.axes):
        q = queries[:, axis]
        ok &= (q >= nodes[0]) & (q <= nodes[-1])
    return ok
