"""Slow, obviously-correct reference implementations for tests and benchmarks.

Nothing here is meant for production streams: exact offline k-medoids is
quadratic in memory and the warping-path search is exponential. They exist to
pin down what the fast paths must compute.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .distance import DistanceFn, ShapeMismatch
from .evaluate import MissingLabel
from .items import AssignmentRecord, StreamItem


class TooFewItems(ValueError):
    """Fewer items than requested medoids."""


class TooLong(ValueError):
    """Sequence too long for exhaustive path enumeration."""


@dataclass
class PamResult:
    medoid_ids: list[str]
    assignments: list[AssignmentRecord]
    total_cost: float
    medoid_indices: list[int]
    swap_cost_history: list[float] = field(default_factory=list)


def pam_exact(
    items: list[StreamItem],
    n_clusters: int,
    distance: DistanceFn | None = None,
    max_iter: int = 100,
) -> PamResult:
    """Offline k-medoids: greedy seeding plus steepest-descent swaps.

    Builds the full pairwise distance matrix, seeds medoids greedily by total
    cost reduction, then repeatedly applies the single best cost-improving
    (medoid, non-medoid) swap until none exists or max_iter is reached.
    Deterministic for a given input order; all ties break toward the lowest
    index.
    """
    n = len(items)
    if n < n_clusters:
        raise TooFewItems(f"{n} items cannot host {n_clusters} medoids")
    if distance is None:
        distance = DistanceFn("euclidean")
    D = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            D[i, j] = D[j, i] = distance(items[i].values, items[j].values)

    # greedy seeding: each new medoid maximizes the drop in total cost
    medoids = [int(np.argmin(D.sum(axis=0)))]
    while len(medoids) < n_clusters:
        nearest = D[:, medoids].min(axis=1)
        reduction = np.maximum(nearest[:, None] - D, 0.0).sum(axis=0)
        reduction[medoids] = -1.0
        medoids.append(int(np.argmax(reduction)))

    history = []
    for _ in range(max_iter):
        med = np.array(medoids)
        dist_to = D[:, med]
        a1 = dist_to.argmin(axis=1)
        d1 = dist_to[np.arange(n), a1]
        masked = dist_to.copy()
        masked[np.arange(n), a1] = np.inf
        d2 = masked.min(axis=1) if n_clusters > 1 else np.full(n, np.inf)
        history.append(float(d1.sum()))

        in_model = set(medoids)
        best_delta = 0.0
        best_swap: tuple[int, int] | None = None
        for mi in range(n_clusters):
            affected = a1 == mi
            for c in range(n):
                if c in in_model:
                    continue
                new_col = D[:, c]
                after = np.where(affected, np.minimum(d2, new_col), np.minimum(d1, new_col))
                delta = float(after.sum() - d1.sum())
                if delta < best_delta:
                    best_delta = delta
                    best_swap = (mi, c)
        if best_swap is None:
            break
        medoids[best_swap[0]] = best_swap[1]

    med = np.array(medoids)
    dist_to = D[:, med]
    a1 = dist_to.argmin(axis=1)
    d1 = dist_to[np.arange(n), a1]
    history.append(float(d1.sum()))
    assignments = [
        AssignmentRecord(items[i].id, items[i].arrival_index, int(a1[i])) for i in range(n)
    ]
    return PamResult(
        medoid_ids=[items[i].id for i in medoids],
        assignments=assignments,
        total_cost=float(d1.sum()),
        medoid_indices=list(medoids),
        swap_cost_history=history,
    )


def nearest_medoid_assign(
    items: list[StreamItem],
    medoid_items: list[StreamItem],
    distance: DistanceFn | None = None,
) -> list[AssignmentRecord]:
    """Assign every item to its nearest of a frozen set of medoids."""
    if distance is None:
        distance = DistanceFn("euclidean")
    records = []
    for it in items:
        dists = [distance(it.values, m.values) for m in medoid_items]
        records.append(
            AssignmentRecord(it.id, it.arrival_index, int(np.argmin(dists)))
        )
    return records


def dtw_bruteforce(a, b, max_len: int = 6) -> float:
    """Minimum cost over all monotone warping paths, enumerated explicitly.

    Independent of the dynamic-programming implementation: every complete
    path from the first to the last cell is walked and summed.
    """
    va = a.values if hasattr(a, "values") else np.asarray(a, dtype=float)
    vb = b.values if hasattr(b, "values") else np.asarray(b, dtype=float)
    if va.ndim == 1:
        va = va.reshape(1, -1)
    if vb.ndim == 1:
        vb = vb.reshape(1, -1)
    if va.shape[0] != vb.shape[0]:
        raise ShapeMismatch(f"dimensionality {va.shape[0]} vs {vb.shape[0]}")
    wa, wb = va.shape[1], vb.shape[1]
    if wa > max_len or wb > max_len:
        raise TooLong(f"lengths ({wa}, {wb}) exceed the enumeration cap {max_len}")
    local = [
        [float(np.linalg.norm(va[:, i] - vb[:, j])) for j in range(wb)] for i in range(wa)
    ]
    best = math.inf

    def walk(i: int, j: int, acc: float) -> None:
        nonlocal best
        acc += local[i][j]
        if i == wa - 1 and j == wb - 1:
            if acc < best:
                best = acc
            return
        if i + 1 < wa:
            walk(i + 1, j, acc)
        if j + 1 < wb:
            walk(i, j + 1, acc)
        if i + 1 < wa and j + 1 < wb:
            walk(i + 1, j + 1, acc)

    walk(0, 0, 0.0)
    return best


def f1_bruteforce(records, labels) -> tuple[float, float, float]:
    """Literal per-pair evaluation of precision, recall, and F1."""
    recs = list(records)
    for r in recs:
        if r.item_id not in labels:
            raise MissingLabel(r.item_id)
    tp = fp = fn = 0
    for x in range(len(recs)):
        for y in range(x + 1, len(recs)):
            same_label = labels[recs[x].item_id] == labels[recs[y].item_id]
            same_cluster = recs[x].cluster_id == recs[y].cluster_id
            if same_label and same_cluster:
                tp += 1
            elif same_label:
                fn += 1
            elif same_cluster:
                fp += 1
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f1
