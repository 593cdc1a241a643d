"""ADB interpolation on regular grids.

One-dimensional step: a query ``x`` near base node ``x_i`` gets its
approximation-degree ``d`` to ``x_i`` along the branch facing the adjacent
node ``x_l`` on ``x``'s side.  That degree is transferred to the value axis
and inverted on the same branch::

    y = d * (y_i - y_l) + y_l

which is the secant through the two nodes, restricted to the half-interval
between ``x_i`` and the midpoint.

n-dimensional step: each axis is interpolated on its own through the
nearest base node, all other coordinates held at that node, and the
per-axis values are combined with the sum-times-difference formula::

    y = y_x1 + y_x2 + ... + y_xn - (n - 1) * y_0
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateNodes, EmptyInput, InconsistentDimension, OutOfDomain
from .grid import RegularGrid, in_domain, nearest_node, nearest_nodes, validate_axis

# rows per task when a batch is split across threads
CHUNK_ROWS = 4096


@dataclass(frozen=True)
class AxisContribution:
    axis: int
    value: float
    neighbor_index: int


def interp_axis(base_x: float, base_y: float, nbr_x: float, nbr_y: float, x: float) -> float:
    """Value at ``x`` of the line through the base node and its neighbour.

    ``x`` must lie between ``base_x`` and ``nbr_x`` (closed).  At
    ``x == base_x`` the base value is returned unchanged.
    """
    if base_x == nbr_x:
        raise DegenerateNodes(f"base and neighbour coincide at {base_x!r}")
    if x == base_x:
        return base_y
    if not min(base_x, nbr_x) <= x <= max(base_x, nbr_x):
        raise OutOfDomain(f"{x!r} is not between {base_x!r} and {nbr_x!r}")
    d = (x - nbr_x) / (base_x - nbr_x)
    return d * (base_y - nbr_y) + nbr_y


def sum_times_difference(contributions: Sequence[float], base_value: float) -> float:
    """Combine per-axis values: ``sum(contributions) - (n - 1) * base_value``.

    Evaluated as ``base_value + sum(c - base_value)``, left to right.  The
    two are equal algebraically, but this form returns ``base_value``
    bit-exactly when every contribution equals it (a query on a node).
    """
    if len(contributions) == 0:
        raise EmptyInput("sum_times_difference needs at least one contribution")
    if len(contributions) == 1:
        return float(contributions[0])
    total = float(base_value)
    for c in contributions:
        total = total + (c - base_value)
    return total


def axis_contributions(
    grid: RegularGrid, query: Sequence[float]
) -> tuple[tuple[int, ...], list[AxisContribution]]:
    """Nearest base node of ``query`` and the per-axis 1D interpolants."""
    base, _ = nearest_node(grid, query)
    y0 = grid.value_at(base)
    out = []
    for axis, q in enumerate(query):
        q = float(q)
        nodes = grid.axes[axis]
        k = base[axis]
        if q == nodes[k]:
            out.append(AxisContribution(axis, y0, k))
            continue
        nbr = k + 1 if q > nodes[k] else k - 1
        # an in-domain query never sits on the outer side of a boundary node
        assert 0 <= nbr < nodes.size
        nbr_idx = base[:axis] + (nbr,) + base[axis + 1:]
        value = interp_axis(float(nodes[k]), y0, float(nodes[nbr]), grid.value_at(nbr_idx), q)
        out.append(AxisContribution(axis, value, nbr))
    return base, out


def interpolate(grid: RegularGrid, query: Sequence[float]) -> float:
    """ADB interpolant of ``grid`` at a single in-domain point."""
    base, contribs = axis_contributions(grid, query)
    return sum_times_difference([c.value for c in contribs], grid.value_at(base))


def interpolate_1d(axis: Sequence[float], values: Sequence[float], x: float) -> float:
    """ADB interpolation through nodes ``axis`` with samples ``values``."""
    nodes = validate_axis(axis)
    return interpolate(RegularGrid((nodes,), np.asarray(values, dtype=np.float64)), (x,))


def _interpolate_block(grid: RegularGrid, queries: np.ndarray) -> np.ndarray:
    # Same arithmetic as interp_axis/sum_times_difference, row-wise.
    m, n = queries.shape
    idx, _ = nearest_nodes(grid, queries)
    flat_values = grid.values.reshape(-1)
    strides = np.array([int(np.prod(grid.shape[j + 1:])) for j in range(n)], dtype=np.intp)
    flat = idx @ strides
    y0 = flat_values[flat]

    acc = None
    with np.errstate(invalid="ignore", divide="ignore"):
        for axis in range(n):
            nodes = grid.axes[axis]
            x = queries[:, axis]
            k = idx[:, axis]
            base_x = nodes[k]
            hit = x == base_x
            nbr = np.clip(np.where(x > base_x, k + 1, k - 1), 0, nodes.size - 1)
            nbr_x = nodes[nbr]
            nbr_y = flat_values[flat + (nbr - k) * strides[axis]]
            d = (x - nbr_x) / (base_x - nbr_x)
            c = np.where(hit, y0, d * (y0 - nbr_y) + nbr_y)
            if n == 1:
                return c
            acc = (y0 if acc is None else acc) + (c - y0)
    return acc


def default_threads() -> int:
    env = os.environ.get("ADB_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def interpolate_many(
    grid: RegularGrid,
    queries: np.ndarray,
    threads: int = 1,
    out_of_domain: str = "raise",
) -> np.ndarray:
    """Interpolate every row of an ``(m, n)`` query array.

    Rows are independent, so they are split into chunks and evaluated on a
    thread pool when ``threads > 1``; the output does not depend on the
    thread count.  With ``out_of_domain="nan"``, rows outside the grid yield
    NaN instead of raising.
    """
    queries = np.asarray(queries, dtype=np.float64)
    if queries.ndim == 1:
        queries = queries.reshape(-1, grid.ndim)
    if queries.shape[1] != grid.ndim:
        raise InconsistentDimension(f"queries have {queries.shape[1]} columns, grid has {grid.ndim} axes")
    m = queries.shape[0]
    out = np.full(m, np.nan)
    if m == 0:
        return out
    ok = in_domain(grid, queries)
    if not ok.all():
        if out_of_domain == "raise":
            bad = int(np.flatnonzero(~ok)[0])
            raise OutOfDomain(f"query row {bad} lies outside the grid")
        if out_of_domain != "nan":
            raise ValueError(f"unknown out_of_domain policy {out_of_domain!r}")
    rows = np.flatnonzero(ok)
    good = queries[rows]

    if threads <= 1 or rows.size <= CHUNK_ROWS:
        out[rows] = _interpolate_block(grid, good)
        return out
    starts = range(0, rows.size, CHUNK_ROWS)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(lambda s: _interpolate_block(grid, good[s:s + CHUNK_ROWS]), starts))
    out[rows] = np.concatenate(parts)
    return out
