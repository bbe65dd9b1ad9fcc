"""Stream item containers and the JSONL wire format.

A stream item is a d x w value matrix (d dimensions, w time steps) with an
opaque id, its arrival position, and an optional ground-truth label. Labels
are carried for evaluation only; the clustering engine never reads them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, TextIO

import numpy as np


class StreamFormatError(ValueError):
    """A JSONL line could not be parsed into a stream item."""

    def __init__(self, line_number: int, message: str):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


@dataclass(eq=False)
class StreamItem:
    id: str
    arrival_index: int
    values: np.ndarray = field(repr=False)
    label: str | None = None

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.ndim == 1:
            vals = vals.reshape(1, -1)
        if vals.ndim != 2 or vals.size == 0:
            raise ValueError(f"item {self.id!r}: values must be a non-empty 2-D matrix")
        if not np.all(np.isfinite(vals)):
            raise ValueError(f"item {self.id!r}: values contain non-finite entries")
        self.values = vals

    @property
    def n_dims(self) -> int:
        return self.values.shape[0]

    @property
    def n_steps(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class AssignmentRecord:
    """Per-item engine output: which cluster the item landed in."""

    item_id: str
    arrival_index: int
    cluster_id: int


def item_to_json(item: StreamItem) -> str:
    return json.dumps(
        {
            "id": item.id,
            "arrival_index": item.arrival_index,
            "label": item.label,
            "values": item.values.tolist(),
        }
    )


def write_jsonl(items: Iterable[StreamItem], fh: TextIO) -> int:
    count = 0
    for item in items:
        fh.write(item_to_json(item) + "\n")
        count += 1
    return count


def read_jsonl(fh: TextIO) -> Iterator[StreamItem]:
    """Parse stream items line by line, reporting the offending line on error."""
    for line_number, line in enumerate(fh, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            doc = json.loads(line)
        except json.JSONDecodeError as exc:
            raise StreamFormatError(line_number, f"invalid JSON ({exc.msg})") from exc
        try:
            yield StreamItem(
                id=str(doc["id"]),
                arrival_index=int(doc["arrival_index"]),
                values=doc["values"],
                label=doc.get("label"),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise StreamFormatError(line_number, str(exc)) from exc


def load_items(path: str) -> list[StreamItem]:
    with open(path, "r", encoding="utf-8") as fh:
        return list(read_jsonl(fh))


def label_map(items: Iterable[StreamItem]) -> dict[str, str]:
    """item id -> label for every labeled item."""
    return {it.id: it.label for it in items if it.label is not None}
