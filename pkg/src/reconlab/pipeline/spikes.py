"""Binarize spike trains: each spike switches its unit on for a random
exponential duration, and the result is cut into equal segments."""

import csv
import json
from pathlib import Path

import numpy as np


def binarize_spikes(spike_times, duration, n_steps, extension_steps, rng):
    """``(N, n_steps)`` 0/1 matrix. A spike at time ``t`` activates steps
    ``k .. k + L - 1`` with ``k = floor(t / duration * n_steps)`` and
    ``L = max(1, round(D))``, ``D`` exponential with mean ``extension_steps``
    (``extension_steps = 0`` gives single-step activations)."""
    if duration <= 0:
        raise ValueError("recording duration must be positive")
    x = np.zeros((len(spike_times), n_steps), dtype=np.uint8)
    for unit, times in enumerate(spike_times):
        times = np.asarray(times, dtype=float)
        if times.size == 0:
            continue
        if np.any(times < 0):
            raise ValueError(f"unit {unit}: negative spike time")
        if np.any(times > duration):
            raise ValueError(f"unit {unit}: spike at {times.max()} beyond recording duration {duration}")
        start = np.minimum((times / duration * n_steps).astype(np.int64), n_steps - 1)
        ext = rng.exponential(extension_steps, size=len(start)) if extension_steps > 0 else np.zeros(len(start))
        length = np.maximum(1, np.rint(ext).astype(np.int64))
        # mark run boundaries with a difference array, then accumulate
        diff = np.zeros(n_steps + 1, dtype=np.int64)
        np.add.at(diff, start, 1)
        np.add.at(diff, np.minimum(start + length, n_steps), -1)
        x[unit] = np.cumsum(diff[:-1]) > 0
    return x


def ingest_spike_data(spike_times, duration, n_steps=100_000, extension_mean=0.012, n_segments=100, rng=None):
    """Binarized segments from per-unit spike times in seconds.

    ``extension_mean`` is in seconds and is converted to steps with the
    step width ``duration / n_steps``.
    """
    if n_segments < 1 or n_segments > n_steps:
        raise ValueError("need 1 <= n_segments <= n_steps")
    rng = rng if rng is not None else np.random.default_rng()
    steps = extension_mean * n_steps / duration
    x = binarize_spikes(spike_times, duration, n_steps, steps, rng)
    return np.array_split(x, n_segments, axis=1)


def read_spike_file(path):
    """JSON ``{"duration": D, "units": [[t, ...], ...]}`` or CSV rows
    ``unit,time`` (duration then defaults to the last spike time)."""
    path = Path(path)
    if path.suffix == ".json":
        spec = json.loads(path.read_text())
        return [np.asarray(u, dtype=float) for u in spec["units"]], float(spec["duration"])
    rows = []
    with open(path) as fh:
        for row in csv.reader(fh):
            try:
                rows.append((int(row[0]), float(row[1])))
            except (ValueError, IndexError):
                continue  # header or comment line
    if not rows:
        raise ValueError(f"{path}: no spikes")
    data = np.array(rows)
    units = data[:, 0].astype(np.int64)
    times = [data[units == u, 1] for u in range(units.max() + 1)]
    return times, float(data[:, 1].max())
