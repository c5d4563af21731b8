"""Wave function networks over sample sets.

Nodes are distinct measurement snapshots; an edge links two snapshots whose
L1 distance is *strictly* below the activation radius R.  The protocol only
needs the degree distribution's mean and standard deviation.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np


@dataclass(frozen=True)
class WfnGraph:
    node_count: int
    radius: int
    degrees: np.ndarray  # (node_count,) int64

    def __post_init__(self):
        deg = np.array(self.degrees, dtype=np.int64, copy=True)
        deg.setflags(write=False)
        object.__setattr__(self, "degrees", deg)
        if deg.shape != (self.node_count,):
            raise ValueError("degree vector length must equal node_count")
        if self.node_count and int(deg.max()) > self.node_count - 1:
            raise ValueError("a degree exceeds node_count - 1")
        if int(deg.sum()) % 2:
            raise ValueError("degree sum must be even")


@dataclass(frozen=True)
class DegreeStats:
    n_samples: int
    mu: float
    sigma: float


def l1_distance(a: Sequence[int], b: Sequence[int]) -> int:
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    return int(sum(abs(int(x) - int(y)) for x, y in zip(a, b)))


def samples_matrix(samples) -> np.ndarray:
    """Rows of per-mode counts as a 32-bit integer matrix.

    Accepts a SampleSet, a sequence of occupation tuples or an array.
    """
    arr = samples.as_array() if hasattr(samples, "as_array") else \
        np.asarray(samples, dtype=np.int32)
    if arr.ndim != 2:
        raise ValueError("expected a (samples, modes) layout")
    return arr.astype(np.int32, copy=False)


def build_graph(samples, radius: int, block: int = 512) -> WfnGraph:
    """Radius graph by plain O(N^2) pair evaluation, integer arithmetic only."""
    if radius < 0:
        raise ValueError("radius must be >= 0")
    x = samples_matrix(samples)
    n_nodes = x.shape[0]
    degrees = np.zeros(n_nodes, dtype=np.int64)
    if radius > 0:
        for lo in range(0, n_nodes, block):
            tile = x[lo:lo + block]
            dist = np.abs(tile[:, None, :] - x[None, :, :]).sum(axis=2)
            # self-distance 0 always satisfies d < R for R > 0
            degrees[lo:lo + block] = (dist < radius).sum(axis=1) - 1
    return WfnGraph(n_nodes, int(radius), degrees)


def degree_stats(graph: WfnGraph) -> DegreeStats:
    """Mean and population standard deviation of the degree distribution."""
    if graph.node_count < 1:
        raise ValueError("degree statistics need at least one node")
    deg = graph.degrees.astype(np.float64)
    return DegreeStats(graph.node_count, float(deg.mean()), float(deg.std()))
