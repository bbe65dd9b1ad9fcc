"""Clustering quality metrics, vote trajectories, and throughput arithmetic.

Quality is measured over unordered item pairs: a pair is a true positive when
both items share a label and a cluster. Counts are computed from the
label-by-cluster contingency table, so relabeling clusters changes nothing.
"""

from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, TextIO

from .core import ModelState
from .items import AssignmentRecord


class MissingLabel(KeyError):
    """A record's item has no ground-truth label."""


@dataclass(frozen=True)
class PairwiseConfusion:
    tp: int
    fp: int
    fn: int
    tn: int


def _pairs(count: int) -> int:
    return count * (count - 1) // 2


def pairwise_confusion(
    records: Iterable[AssignmentRecord], labels: Mapping[str, str]
) -> PairwiseConfusion:
    """Pair counts over all unordered record pairs, via the contingency table."""
    cells: Counter = Counter()
    per_cluster: Counter = Counter()
    per_label: Counter = Counter()
    n = 0
    for r in records:
        if r.item_id not in labels:
            raise MissingLabel(r.item_id)
        y = labels[r.item_id]
        cells[(y, r.cluster_id)] += 1
        per_cluster[r.cluster_id] += 1
        per_label[y] += 1
        n += 1
    tp = sum(_pairs(c) for c in cells.values())
    fp = sum(_pairs(c) for c in per_cluster.values()) - tp
    fn = sum(_pairs(c) for c in per_label.values()) - tp
    tn = _pairs(n) - tp - fp - fn
    return PairwiseConfusion(tp, fp, fn, tn)


def _precision_recall_f1(tp: int, fp: int, fn: int) -> tuple[float, float, float]:
    # zero-denominator convention: undefined precision/recall count as 0
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f1


def pairwise_f1(
    records: Iterable[AssignmentRecord], labels: Mapping[str, str]
) -> tuple[float, float, float]:
    """(precision, recall, f1) over unordered item pairs."""
    c = pairwise_confusion(records, labels)
    return _precision_recall_f1(c.tp, c.fp, c.fn)


def cumulative_f1(
    records: Iterable[AssignmentRecord],
    labels: Mapping[str, str],
    every: int,
) -> list[tuple[int, float]]:
    """F1 over the records seen so far, sampled every ``every`` records.

    A final checkpoint at the last record is always included, so the last
    entry equals the full-stream pairwise_f1.
    """
    if every < 1:
        raise ValueError("every must be at least 1")
    records = list(records)
    cells: Counter = Counter()
    per_cluster: Counter = Counter()
    per_label: Counter = Counter()
    series: list[tuple[int, float]] = []
    for i, r in enumerate(records, start=1):
        if r.item_id not in labels:
            raise MissingLabel(r.item_id)
        y = labels[r.item_id]
        cells[(y, r.cluster_id)] += 1
        per_cluster[r.cluster_id] += 1
        per_label[y] += 1
        if i % every == 0 or i == len(records):
            tp = sum(_pairs(c) for c in cells.values())
            fp = sum(_pairs(c) for c in per_cluster.values()) - tp
            fn = sum(_pairs(c) for c in per_label.values()) - tp
            series.append((r.arrival_index, _precision_recall_f1(tp, fp, fn)[2]))
    return series


@dataclass(frozen=True)
class VoteTraceRow:
    arrival_index: int
    cluster_id: int
    slot: int
    votes: float
    medoid_item_id: str


class VoteTrace:
    """Observer logging the updated cluster's per-slot votes after each item.

    Pass ``observe`` as the process_stream observer; one row per medoid slot
    of the updated cluster is appended per processed item.
    """

    def __init__(self):
        self.rows: list[VoteTraceRow] = []

    def observe(self, record: AssignmentRecord, model: ModelState) -> None:
        cl = model.clusters[record.cluster_id]
        for slot, m in enumerate(cl.medoids):
            self.rows.append(
                VoteTraceRow(
                    arrival_index=record.arrival_index,
                    cluster_id=cl.cluster_id,
                    slot=slot,
                    votes=m.votes,
                    medoid_item_id=m.item.id,
                )
            )

    def write_csv(self, fh: TextIO) -> None:
        writer = csv.writer(fh)
        writer.writerow(["arrival_index", "cluster_id", "slot", "votes", "medoid_item_id"])
        for row in self.rows:
            writer.writerow(
                [row.arrival_index, row.cluster_id, row.slot, repr(row.votes), row.medoid_item_id]
            )


@dataclass(frozen=True)
class ThroughputReport:
    seq_per_s: float
    flows_per_s: float
    packets_per_s: float
    est_bandwidth_bps: float


def throughput_report(
    items_processed: int,
    wall_time_s: float,
    flows_per_sequence: float,
    packets_per_flow: float,
    bytes_per_packet: float,
) -> ThroughputReport:
    """Back-of-the-envelope bandwidth the engine could keep up with.

    Assumes the sequence windows tile the underlying flow stream without
    overlap, so each clustered sequence accounts for ``flows_per_sequence``
    flows (the window length, for non-overlapping windows).
    """
    if wall_time_s <= 0:
        raise ValueError("wall_time_s must be positive")
    seq_per_s = items_processed / wall_time_s
    flows_per_s = seq_per_s * flows_per_sequence
    packets_per_s = flows_per_s * packets_per_flow
    return ThroughputReport(
        seq_per_s=seq_per_s,
        flows_per_s=flows_per_s,
        packets_per_s=packets_per_s,
        est_bandwidth_bps=packets_per_s * bytes_per_packet * 8.0,
    )
