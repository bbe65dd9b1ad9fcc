"""Seeded generators for synthetic point and sequence streams.

Every generator is a pure function of its configuration and seed: equal
inputs produce bit-identical output. Labels are attached for evaluation but
are never consulted by the clustering engine.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .items import StreamItem


class BadConfig(ValueError):
    """Generator configuration is internally inconsistent."""


@dataclass(frozen=True)
class SineClassConfig:
    """One sine class: a frequency band, a base phase, and a noise level."""

    frequency_range: tuple[float, float]
    phase: float
    error: float

    def __post_init__(self):
        low, high = self.frequency_range
        if low > high:
            raise BadConfig("frequency_range low must not exceed high")
        if self.error < 0:
            raise BadConfig("error must be non-negative")


#: Four reference sine classes with staggered frequency bands, distinct base
#: phases, and varying per-step noise. Used by the demos and the benchmarks.
DEFAULT_SINE_CLASSES: tuple[SineClassConfig, ...] = (
    SineClassConfig((0.10, 0.12), 5.0, 0.2),
    SineClassConfig((0.20, 0.22), 12.0, 0.4),
    SineClassConfig((0.40, 0.42), -10.0, 0.7),
    SineClassConfig((0.60, 0.62), -20.0, 0.1),
)


@dataclass(frozen=True)
class DriftConfig:
    """Incremental drift: each emitted curve's phase shifts by drift * index."""

    kind: str = "none"  # "none" | "incremental_phase"
    drift: float = 0.0

    def __post_init__(self):
        if self.kind not in ("none", "incremental_phase"):
            raise BadConfig(f"unknown drift kind {self.kind!r}")
        if not np.isfinite(self.drift):
            raise BadConfig("drift must be finite")


NO_DRIFT = DriftConfig()


@dataclass(frozen=True)
class StreamOrder:
    """How a stream is ordered before processing."""

    kind: str  # "shuffled" | "time_ordered" | "class_ordered"
    trial_seed: int = 0

    def __post_init__(self):
        if self.kind not in ("shuffled", "time_ordered", "class_ordered"):
            raise BadConfig(f"unknown stream order {self.kind!r}")


def gen_blobs(n: int, n_classes: int, stds: list[float], seed: int = 0) -> list[StreamItem]:
    """2-D Gaussian blobs: n points equally distributed over n_classes.

    Class centers are drawn uniformly in [-10, 10]^2 under the seed; class c
    is isotropic Gaussian noise of scale stds[c] around its center. Items are
    d=2, w=1.
    """
    if n_classes < 1 or n % n_classes != 0:
        raise BadConfig("n must divide evenly across classes")
    if len(stds) != n_classes:
        raise BadConfig(f"need exactly {n_classes} stds, got {len(stds)}")
    if any(s < 0 for s in stds):
        raise BadConfig("stds must be non-negative")
    rng = np.random.default_rng(seed)
    centers = rng.uniform(-10.0, 10.0, size=(n_classes, 2))
    per = n // n_classes
    items: list[StreamItem] = []
    idx = 0
    for c in range(n_classes):
        points = centers[c] + stds[c] * rng.standard_normal((per, 2))
        for r in range(per):
            items.append(
                StreamItem(
                    id=f"blob-{idx:08d}",
                    arrival_index=idx,
                    values=points[r].reshape(2, 1),
                    label=f"c{c}",
                )
            )
            idx += 1
    return items


def blob_centers(n_classes: int, seed: int = 0) -> np.ndarray:
    """The class centers gen_blobs would use for this seed (for oracles)."""
    rng = np.random.default_rng(seed)
    return rng.uniform(-10.0, 10.0, size=(n_classes, 2))


def gen_sine(
    n: int,
    configs: list[SineClassConfig] | tuple[SineClassConfig, ...],
    w: int,
    drift: DriftConfig = NO_DRIFT,
    seed: int = 0,
) -> list[StreamItem]:
    """Univariate sine-curve windows, n items equally divided over the classes.

    Curve i of the emitted stream belongs to a class drawn by a seeded
    interleaving; its frequency is sampled from the class band, its phase is
    the class phase plus drift * i under incremental phase drift, and uniform
    noise in [-error, +error] is added at every one of the w steps. Emission
    order is the interleaving itself, so drift correlates with arrival, which
    is what makes the drifted streams actually drift.
    """
    m = len(configs)
    if m < 1 or n % m != 0:
        raise BadConfig("n must divide evenly across classes")
    if w < 1:
        raise BadConfig("window length must be at least 1")
    rng = np.random.default_rng(seed)
    per = n // m
    classes = rng.permutation(np.repeat(np.arange(m), per))
    lows = np.array([c.frequency_range[0] for c in configs])[classes]
    highs = np.array([c.frequency_range[1] for c in configs])[classes]
    freqs = rng.uniform(lows, highs)
    errors = np.array([c.error for c in configs])[classes]
    noise = rng.uniform(-errors[:, None], errors[:, None], size=(n, w))
    phases = np.array([c.phase for c in configs])[classes]
    if drift.kind == "incremental_phase":
        phases = phases + drift.drift * np.arange(n)
    t = np.arange(w)
    values = np.sin(freqs[:, None] * t[None, :] + phases[:, None]) + noise
    return [
        StreamItem(
            id=f"sine-{i:08d}",
            arrival_index=i,
            values=values[i].reshape(1, w),
            label=f"c{classes[i]}",
        )
        for i in range(n)
    ]


def _normal_series(rng: np.random.Generator, length: int) -> np.ndarray:
    # steady low-volume traffic: small lognormal per-flow byte averages
    return rng.lognormal(mean=np.log(300.0), sigma=0.35, size=length)


def _botnet_series(rng: np.random.Generator, length: int) -> np.ndarray:
    # elevated baseline plus periodic command-and-control bursts
    series = rng.lognormal(mean=np.log(2500.0), sigma=0.3, size=length)
    period = int(rng.integers(8, 17))
    offset = int(rng.integers(period))
    amplitude = rng.lognormal(mean=np.log(6000.0), sigma=0.25)
    t = np.arange(length)
    burst = ((t + offset) % period) < 3
    series[burst] += amplitude * (1.0 + 0.2 * rng.standard_normal(int(burst.sum())))
    return series


def gen_netflow_stream(
    n_hosts: int, flows_per_host: int, w: int, step: int = 1, seed: int = 0
) -> list[StreamItem]:
    """Synthetic per-host byte-volume sequences cut by a sliding window.

    Hosts follow one of two behavioral profiles (labels "botnet"/"normal"
    with distinct level and burst statistics). Each host contributes
    floor((flows_per_host - w) / step) + 1 windows of length w.
    """
    if n_hosts < 1:
        raise BadConfig("need at least one host")
    if w < 1 or step < 1:
        raise BadConfig("window and step must be positive")
    if flows_per_host < w:
        raise BadConfig("flows_per_host must be at least the window length")
    rng = np.random.default_rng(seed)
    n_botnet = int(round(n_hosts * 10 / 16))
    if n_hosts >= 2:
        n_botnet = min(max(n_botnet, 1), n_hosts - 1)
    items: list[StreamItem] = []
    idx = 0
    for h in range(n_hosts):
        infected = h < n_botnet
        series = (
            _botnet_series(rng, flows_per_host)
            if infected
            else _normal_series(rng, flows_per_host)
        )
        label = "botnet" if infected else "normal"
        for start in range(0, flows_per_host - w + 1, step):
            items.append(
                StreamItem(
                    id=f"host{h:03d}-f{start:06d}",
                    arrival_index=idx,
                    values=series[start : start + w].reshape(1, w),
                    label=label,
                )
            )
            idx += 1
    return items


def order_stream(items: list[StreamItem], order: StreamOrder) -> list[StreamItem]:
    """Reorder a stream and rewrite arrival indices to the new positions.

    shuffled: seeded permutation; time_ordered: stable sort by arrival index;
    class_ordered: stable sort by label (one class at a time, original
    relative order preserved within each class).
    """
    if order.kind == "shuffled":
        rng = np.random.default_rng(order.trial_seed)
        out = [items[int(j)] for j in rng.permutation(len(items))]
    elif order.kind == "time_ordered":
        out = sorted(items, key=lambda it: it.arrival_index)
    else:
        out = sorted(items, key=lambda it: (it.label is None, it.label or ""))
    return [replace(it, arrival_index=i) for i, it in enumerate(out)]
