"""Hybrid partitioning of the base signature.

Equal-width vertical time sections, per-section dynamics averages,
high/low horizontal bands, and extraction of shape-trajectory fragments
for every (signal, trajectory, section, band) cell.
"""

from __future__ import annotations

import numpy as np

from .errors import NotDivisible
from .model import NormalizedSignature, PartitionMap, SIGNALS, TRAJECTORIES


def vertical_sections(K: int, P: int) -> np.ndarray:
    """Section index (1..P) per sample; each section spans K/P samples."""
    if P < 1:
        raise NotDivisible("P must be >= 1")
    if K % P != 0:
        raise NotDivisible(f"K={K} not divisible by P={P}")
    return np.repeat(np.arange(1, P + 1), K // P)


def section_average(s_base: np.ndarray, pv: np.ndarray, p: int) -> float:
    """Mean of the dynamics signal over vertical section p."""
    return float(np.asarray(s_base)[pv == p].mean())


def horizontal_sections(s_base: np.ndarray, pv: np.ndarray) -> np.ndarray:
    """Band index per sample: 1 below the section average, 2 at or above."""
    s_base = np.asarray(s_base, dtype=float)
    averages = {p: section_average(s_base, pv, p) for p in np.unique(pv)}
    thresholds = np.array([averages[p] for p in pv])
    return np.where(s_base < thresholds, 1, 2)


def build_partition_map(s_base: np.ndarray, P: int) -> PartitionMap:
    """Full section assignment for one dynamics signal of the base."""
    s_base = np.asarray(s_base, dtype=float)
    K = len(s_base)
    pv = vertical_sections(K, P)
    ph = horizontal_sections(s_base, pv)
    avgs = np.array([section_average(s_base, pv, p) for p in range(1, P + 1)])
    counts = np.array([int(np.sum(pv == p)) for p in range(1, P + 1)])
    return PartitionMap(pv=pv, ph=ph, section_averages=avgs, section_counts=counts)


def build_partition_maps(base: NormalizedSignature, P: int) -> dict:
    """Partition maps for both dynamics signals of the base signature."""
    return {"v": build_partition_map(base.v, P), "z": build_partition_map(base.z, P)}


def cell_indices(pmap: PartitionMap, p: int, r: int) -> np.ndarray:
    """Sample indices falling in partition cell (p, r), in original order."""
    return np.flatnonzero((pmap.pv == p) & (pmap.ph == r))


def extract_fragments(sig: NormalizedSignature, maps: dict) -> dict:
    """Shape-trajectory fragments per (s, a, p, r) cell.

    Cells are selected purely by the stored maps, so the same maps select
    identical index sets from any signature of matching length.
    """
    fragments = {}
    for s in SIGNALS:
        pmap = maps[s]
        P = len(pmap.section_counts)
        for p in range(1, P + 1):
            for r in (1, 2):
                idx = cell_indices(pmap, p, r)
                for a in TRAJECTORIES:
                    fragments[(s, a, p, r)] = getattr(sig, a)[idx]
    return fragments
