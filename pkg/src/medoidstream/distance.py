"""Pure distance functions over value matrices.

Two kinds are supported: flattened Euclidean distance for items of identical
shape, and full dynamic time warping for sequences whose lengths may differ.
Both are deterministic, side-effect free, and return finite non-negative
reals in double precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class ShapeMismatch(ValueError):
    """Inputs disagree on dimensionality (or shape, for Euclidean)."""


class BandInfeasible(ValueError):
    """The warping band excludes the terminal alignment cell."""


def _values(x) -> np.ndarray:
    vals = x.values if hasattr(x, "values") else np.asarray(x, dtype=np.float64)
    if vals.ndim == 1:
        vals = vals.reshape(1, -1)
    return vals


def euclidean(a, b) -> float:
    """L2 norm of the flattened difference between two equally shaped items."""
    va, vb = _values(a), _values(b)
    if va.shape != vb.shape:
        raise ShapeMismatch(f"shapes {va.shape} and {vb.shape} differ")
    diff = va - vb
    return math.sqrt(float(np.sum(diff * diff)))


def dtw(a, b, band: int | None = None) -> float:
    """Classical dynamic time warping cost between two sequences.

    The local cost of aligning step i of ``a`` with step j of ``b`` is the L2
    norm of the pointwise difference; the cumulative cost follows the usual
    recurrence over insert/delete/match moves. No path-length normalization is
    applied. ``band`` is an optional Sakoe-Chiba half-width: cells with
    |i - j| > band are infeasible.
    """
    va, vb = _values(a), _values(b)
    if va.shape[0] != vb.shape[0]:
        raise ShapeMismatch(f"dimensionality {va.shape[0]} vs {vb.shape[0]}")
    if band is not None and band < 0:
        raise ValueError("band must be non-negative")
    wa, wb = va.shape[1], vb.shape[1]
    if band is not None and abs(wa - wb) > band:
        raise BandInfeasible(f"band {band} cannot reach cell ({wa - 1}, {wb - 1})")

    # local[i][j] = L2 norm of column i of a minus column j of b
    diff = va.T[:, None, :] - vb.T[None, :, :]
    local = np.sqrt(np.sum(diff * diff, axis=2))

    inf = math.inf
    prev: list[float] = [inf] * wb
    for i in range(wa):
        cur = [inf] * wb
        lo = 0 if band is None else max(0, i - band)
        hi = wb - 1 if band is None else min(wb - 1, i + band)
        row = local[i].tolist()
        for j in range(lo, hi + 1):
            if i == 0 and j == 0:
                cur[0] = row[0]
                continue
            # infeasible predecessors hold +inf; the j > 0 guard only
            # prevents index wrap-around
            best = prev[j]
            if j > 0:
                if cur[j - 1] < best:
                    best = cur[j - 1]
                if prev[j - 1] < best:
                    best = prev[j - 1]
            cur[j] = row[j] + best
        prev = cur
    return float(prev[wb - 1])


@dataclass(frozen=True)
class DistanceFn:
    """Selectable distance: ``euclidean`` or ``dtw`` with an optional band."""

    kind: str = "euclidean"
    band: int | None = None

    def __post_init__(self):
        if self.kind not in ("euclidean", "dtw"):
            raise ValueError(f"unknown distance kind {self.kind!r}")
        if self.band is not None:
            if self.kind != "dtw":
                raise ValueError("band only applies to dtw")
            if self.band < 0:
                raise ValueError("band must be non-negative")

    def __call__(self, a, b) -> float:
        if self.kind == "euclidean":
            return euclidean(a, b)
        return dtw(a, b, band=self.band)
