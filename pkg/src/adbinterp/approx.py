"""Approximation regions and the piecewise-linear approximation-degree.

A value ``x`` is *approximate* to a center ``x0`` when it lies in the closed
interval ``[x0 - r_l, x0 + r_r]``.  Inside that interval its degree of
approximation rises linearly from 0 at either boundary to 1 at the center.
Outside it, ``approximation_degree`` returns ``None`` (not approximate);
that is a normal outcome rather than an error.

For vectors, approximation is *strict*: every component must be approximate
to the matching component of the center, so the region is an axis-aligned
box.  Component degrees are combined with ``min``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import EmptyInput, ZeroRadiusSide


class Side(str, enum.Enum):
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True)
class ApproximationRegion:
    """Closed interval ``[center - left_radius, center + right_radius]``.

    One of the radii may be zero, which is how the first and last nodes of
    an axis get their one-sided regions.  ``low`` and ``high`` are stored,
    not recomputed: a region built with ``from_bounds`` keeps its bounds
    bit-exact even when ``center - left_radius`` would round differently.
    """

    center: float
    left_radius: float
    right_radius: float
    low: float = field(init=False, repr=False, compare=False)
    high: float = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "low", self.center - self.left_radius)
        object.__setattr__(self, "high", self.center + self.right_radius)
        for name in ("center", "left_radius", "right_radius"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v!r}")
        if self.left_radius < 0 or self.right_radius < 0:
            raise ValueError("approximation radii must be nonnegative")
        if self.left_radius + self.right_radius <= 0:
            raise ValueError("approximation region must have positive width")

    @classmethod
    def from_bounds(cls, low: float, center: float, high: float) -> "ApproximationRegion":
        if not low <= center <= high:
            raise ValueError(f"need low <= center <= high, got {low!r}, {center!r}, {high!r}")
        region = cls(center, center - low, high - center)
        object.__setattr__(region, "low", float(low))
        object.__setattr__(region, "high", float(high))
        return region

    def __contains__(self, x: float) -> bool:
        return self.low <= x <= self.high

    def side_of(self, x: float) -> Side:
        return Side.LEFT if x < self.center else Side.RIGHT


def approximation_degree(region: ApproximationRegion, x: float) -> Optional[float]:
    """Degree in ``[0, 1]`` of ``x`` to ``region.center``, or ``None``.

    ``None`` means ``x`` falls outside the region.  The boundaries are
    included and carry degree 0.
    """
    low, high, c = region.low, region.high, region.center
    if x < low or x > high:
        return None
    if x == c:
        return 1.0
    if x < c:
        return (x - low) / (c - low)
    return (x - high) / (c - high)


def inverse_degree(region: ApproximationRegion, d: float, side: Side | str) -> float:
    """Return the point on ``side`` of the center whose degree is ``d``."""
    side = Side(side)
    if not 0.0 <= d <= 1.0:
        raise ValueError(f"degree must lie in [0, 1], got {d!r}")
    if d == 1.0:
        return region.center
    if side is Side.LEFT:
        if region.left_radius == 0:
            raise ZeroRadiusSide("left radius is zero; only degree 1 is invertible")
        low = region.low
        return d * (region.center - low) + low
    if region.right_radius == 0:
        raise ZeroRadiusSide("right radius is zero; only degree 1 is invertible")
    high = region.high
    return d * (region.center - high) + high


def vector_degree(component_degrees: Iterable[Optional[float]]) -> Optional[float]:
    """Combine per-component degrees into the degree of a vector.

    Strict approximation is a conjunction, so any ``None`` component makes
    the whole vector non-approximate; otherwise the weakest component wins.
    """
    degrees = list(component_degrees)
    if not degrees:
        raise EmptyInput("vector_degree needs at least one component")
    if any(d is None for d in degrees):
        return None
    return min(degrees)


def estimate_value(
    x_region: ApproximationRegion,
    y_region: ApproximationRegion,
    x: float,
    reference: tuple[float, float] | None = None,
    fallback: str = "mean",
) -> float:
    """Approximate ``f(x)`` from a known pair ``(x0, y0)`` by degree transfer.

    The degree of ``x`` to ``x0`` is carried over to ``y`` and inverted
    through ``y_region``, which yields two candidates, one on either side of
    ``y0``.  A known ``reference`` pair ``(x*, y*)`` near ``x0`` on the same
    side as ``x`` reveals the local trend and selects the branch.  Without a
    reference, ``fallback`` picks ``"mean"`` of the two candidates or the
    ``"base"`` value ``y0``.

    Raises
    ------
    ValueError
        If ``x`` is not approximate to ``x0``, or the reference lies on the
        other side of ``x0`` or outside its region.
    """
    d = approximation_degree(x_region, x)
    if d is None:
        raise ValueError(f"{x!r} is not approximate to {x_region.center!r}")
    x0, y0 = x_region.center, y_region.center
    if d == 1.0:
        return y0

    if reference is None:
        if fallback == "base":
            return y0
        if fallback != "mean":
            raise ValueError(f"unknown fallback {fallback!r}")
        lo = inverse_degree(y_region, d, Side.LEFT) if y_region.left_radius > 0 else y0
        hi = inverse_degree(y_region, d, Side.RIGHT) if y_region.right_radius > 0 else y0
        return (lo + hi) / 2

    ref_x, ref_y = reference
    if ref_x not in x_region or (ref_x - x0) * (x - x0) <= 0:
        raise ValueError("reference point must lie in the region, on the same side as x")
    if ref_y == y0:
        return y0
    # moving from x0 toward x, the function heads toward ref_y
    side = Side.LEFT if ref_y < y0 else Side.RIGHT
    return inverse_degree(y_region, d, side)
