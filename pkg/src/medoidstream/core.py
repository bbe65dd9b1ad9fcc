"""The streaming k-medoids state machine.

The model keeps exactly ``n_clusters * n_medoids`` stored items at all times.
Each arriving item is assigned to the cluster whose medoids have the least
average distance to it, the closest medoid gains a vote while the rest of
that cluster's votes decay, and the item is then promoted into the cluster by
replacing the least-voted medoid that is not the most recently promoted one.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

import numpy as np

from .distance import DistanceFn
from .items import AssignmentRecord, StreamItem


class InsufficientBatch(ValueError):
    """The init batch is too small to seed every medoid slot."""


@dataclass(eq=False)
class Medoid:
    item: StreamItem
    votes: float = 0.0


@dataclass(eq=False)
class ClusterState:
    cluster_id: int
    medoids: list[Medoid]
    newest_index: int


@dataclass
class Counters:
    distance_calls: int = 0
    items_processed: int = 0


@dataclass(eq=False)
class ModelState:
    """k clusters of p medoids each, plus parameters and instrumentation."""

    clusters: list[ClusterState]
    n_clusters: int
    n_medoids: int
    decay: float
    distance: DistanceFn
    rng_seed: int
    counters: Counters = field(default_factory=Counters)

    def _dist(self, a: StreamItem, b: StreamItem) -> float:
        self.counters.distance_calls += 1
        return self.distance(a.values, b.values)

    def medoid_items(self) -> list[StreamItem]:
        return [m.item for cl in self.clusters for m in cl.medoids]


def batch_size(n_clusters: int, n_medoids: int, batch_factor: float = 1.5) -> int:
    """Init batch size: ceil(batch_factor * k * p)."""
    return math.ceil(batch_factor * n_clusters * n_medoids)


def init(
    batch: list[StreamItem],
    n_clusters: int,
    n_medoids: int,
    *,
    distance: DistanceFn | None = None,
    decay: float = 0.1,
    mode: str = "sampled",
    seed: int = 0,
) -> ModelState:
    """Seed the model from an initial batch.

    In ``sampled`` mode the first primary medoid is drawn uniformly, the
    remaining primaries are drawn without replacement with probability
    proportional to the squared distance to that first primary, and each
    cluster then takes the batch items closest to its primary (skipping items
    already used as medoids anywhere) as its remaining medoids. Exactly
    ``n_clusters * len(batch)`` distance evaluations are consumed. ``random``
    mode draws all medoids uniformly without replacement and consumes none.
    """
    if n_clusters < 1 or n_medoids < 1:
        raise ValueError("n_clusters and n_medoids must be positive")
    if not 0.0 <= decay < 1.0:
        raise ValueError("decay must lie in [0, 1)")
    if mode not in ("sampled", "random"):
        raise ValueError(f"unknown init mode {mode!r}")
    needed = n_clusters * n_medoids
    if len(batch) < needed:
        raise InsufficientBatch(
            f"batch of {len(batch)} items cannot seed {n_clusters}x{n_medoids} medoids"
        )
    if distance is None:
        distance = DistanceFn("euclidean")

    model = ModelState(
        clusters=[],
        n_clusters=n_clusters,
        n_medoids=n_medoids,
        decay=decay,
        distance=distance,
        rng_seed=seed,
    )
    rng = np.random.default_rng(seed)
    b = len(batch)

    if mode == "random":
        chosen = rng.choice(b, size=needed, replace=False)
        for cid in range(n_clusters):
            slots = chosen[cid * n_medoids : (cid + 1) * n_medoids]
            medoids = [Medoid(batch[int(j)]) for j in slots]
            model.clusters.append(ClusterState(cid, medoids, newest_index=n_medoids - 1))
        return model

    # Primary medoids: one full distance row per primary, k*b calls total.
    # The first row doubles as the sampling weights.
    primaries = [int(rng.integers(b))]
    rows = [np.array([model._dist(batch[j], batch[primaries[0]]) for j in range(b)])]
    weights = rows[0] ** 2
    pool = [j for j in range(b) if j != primaries[0]]
    for _ in range(1, n_clusters):
        w = weights[pool]
        total = float(w.sum())
        if total > 0.0:
            pick = pool[int(rng.choice(len(pool), p=w / total))]
        else:
            # every remaining weight is zero: fall back to a uniform draw
            pick = pool[int(rng.integers(len(pool)))]
        primaries.append(pick)
        pool.remove(pick)
    for i in range(1, n_clusters):
        rows.append(np.array([model._dist(batch[j], batch[primaries[i]]) for j in range(b)]))

    used = set(primaries)
    for cid in range(n_clusters):
        row = rows[cid]
        extras: list[int] = []
        for j in sorted(range(b), key=lambda j: (row[j], j)):
            if j in used:
                continue
            extras.append(j)
            used.add(j)
            if len(extras) == n_medoids - 1:
                break
        medoids = [Medoid(batch[primaries[cid]])] + [Medoid(batch[j]) for j in extras]
        model.clusters.append(ClusterState(cid, medoids, newest_index=n_medoids - 1))
    return model


def assign(model: ModelState, s: StreamItem) -> tuple[int, int]:
    """Assign ``s`` to the cluster with the least average medoid distance.

    Returns (cluster_id, index of the closest medoid within that cluster).
    Read-only probe: exactly k*p distance evaluations, no vote changes. Ties
    break toward the lowest cluster id, then the lowest medoid slot.
    """
    best_cid = -1
    best_mean = math.inf
    best_dists: list[float] | None = None
    p = model.n_medoids
    for cl in model.clusters:
        dists = [model._dist(s, m.item) for m in cl.medoids]
        mean = sum(dists) / p
        if mean < best_mean:
            best_mean = mean
            best_cid = cl.cluster_id
            best_dists = dists
    assert best_dists is not None
    closest = min(range(p), key=best_dists.__getitem__)
    return best_cid, closest


def vote_and_update(
    model: ModelState, s: StreamItem, cluster_id: int, closest_medoid_index: int
) -> ModelState:
    """Apply the vote, decay the rest of the cluster, and promote ``s``.

    The closest medoid gains one vote and every other medoid of the assigned
    cluster decays by (1 - decay). The least-voted medoid other than the most
    recently promoted one is then replaced by ``s`` with zero votes (with a
    single medoid per cluster the recency exclusion is waived, otherwise no
    replacement could ever happen). No distance computations occur.
    """
    cl = model.clusters[cluster_id]
    keep = 1.0 - model.decay
    for j, m in enumerate(cl.medoids):
        if j == closest_medoid_index:
            m.votes += 1.0
        else:
            m.votes *= keep
    if model.n_medoids == 1:
        candidates = [0]
    else:
        candidates = [j for j in range(model.n_medoids) if j != cl.newest_index]
    replaced = min(candidates, key=lambda j: cl.medoids[j].votes)
    cl.medoids[replaced] = Medoid(item=s, votes=0.0)
    cl.newest_index = replaced
    model.counters.items_processed += 1
    return model


def process_stream(
    model: ModelState,
    stream: Iterable[StreamItem],
    observer: Callable[[AssignmentRecord, ModelState], None] | None = None,
) -> Iterator[AssignmentRecord]:
    """Lazily cluster a stream, one pass, yielding one record per item.

    ``observer`` (if given) is called after each vote-and-update with the
    emitted record and the live model, e.g. to log vote trajectories.
    """
    for s in stream:
        cid, closest = assign(model, s)
        record = AssignmentRecord(
            item_id=s.id, arrival_index=s.arrival_index, cluster_id=cid
        )
        vote_and_update(model, s, cid, closest)
        if observer is not None:
            observer(record, model)
        yield record


def assign_batch_items(model: ModelState, batch: list[StreamItem]) -> list[AssignmentRecord]:
    """Label the init-batch items so every stream item has one output record.

    Items currently serving as medoids map to their own cluster for free;
    everything else takes a read-only assignment probe (distance calls are
    counted, votes and medoids stay untouched).
    """
    owner: dict[str, int] = {}
    for cl in model.clusters:
        for m in cl.medoids:
            owner[m.item.id] = cl.cluster_id
    records = []
    for s in batch:
        cid = owner.get(s.id)
        if cid is None:
            cid, _ = assign(model, s)
        records.append(AssignmentRecord(s.id, s.arrival_index, cid))
    return records


# Snapshot wire format. Field order is fixed; reals are rendered in
# fixed-width scientific notation with 17 significant digits (lossless for
# doubles) and counters are right-aligned in a fixed-width field, so the
# serialized size depends only on (k, p, d, w) and the id widths, never on
# how much stream has been processed.

_REAL_WIDTH = 24
_COUNT_WIDTH = 20


def _real(x: float) -> str:
    return f"{float(x):>{_REAL_WIDTH}.16e}"


def _count(x: int) -> str:
    return f"{int(x):>{_COUNT_WIDTH}d}"


def snapshot(model: ModelState) -> str:
    """Serialize the full model image as a single JSON document (one line)."""
    d = model.distance
    band = "null" if d.band is None else str(int(d.band))
    medless = []
    for cl in model.clusters:
        meds = []
        for m in cl.medoids:
            values = (
                "["
                + ", ".join(
                    "[" + ", ".join(_real(v) for v in row) + "]"
                    for row in m.item.values.tolist()
                )
                + "]"
            )
            meds.append(
                '{"id": %s, "votes": %s, "values": %s}'
                % (json.dumps(m.item.id), _real(m.votes), values)
            )
        medless.append(
            '{"cluster_id": %d, "newest_index": %d, "medoids": [%s]}'
            % (cl.cluster_id, cl.newest_index, ", ".join(meds))
        )
    fields = [
        '"k": %d' % model.n_clusters,
        '"p": %d' % model.n_medoids,
        '"lambda": %s' % _real(model.decay),
        '"distance": {"kind": %s, "band": %s}' % (json.dumps(d.kind), band),
        '"seed": %d' % model.rng_seed,
        '"counters": {"distance_calls": %s, "items_processed": %s}'
        % (_count(model.counters.distance_calls), _count(model.counters.items_processed)),
        '"clusters": [%s]' % ", ".join(medless),
    ]
    return "{" + ", ".join(fields) + "}"


def restore(document: str) -> ModelState:
    """Rebuild a model from a snapshot document.

    Medoid items come back with arrival_index 0 and no label; neither is part
    of the wire format.
    """
    doc = json.loads(document)
    distance = DistanceFn(kind=doc["distance"]["kind"], band=doc["distance"]["band"])
    clusters = []
    for cdoc in doc["clusters"]:
        medoids = [
            Medoid(
                item=StreamItem(id=m["id"], arrival_index=0, values=m["values"]),
                votes=float(m["votes"]),
            )
            for m in cdoc["medoids"]
        ]
        clusters.append(
            ClusterState(
                cluster_id=int(cdoc["cluster_id"]),
                medoids=medoids,
                newest_index=int(cdoc["newest_index"]),
            )
        )
    return ModelState(
        clusters=clusters,
        n_clusters=int(doc["k"]),
        n_medoids=int(doc["p"]),
        decay=float(doc["lambda"]),
        distance=distance,
        rng_seed=int(doc["seed"]),
        counters=Counters(
            distance_calls=int(doc["counters"]["distance_calls"]),
            items_processed=int(doc["counters"]["items_processed"]),
        ),
    )
