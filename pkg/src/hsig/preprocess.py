"""Signature normalization pipeline.

Velocity derivation, base-signature selection, DTW alignment of the
dynamics channels, trajectory warping onto the base timeline, PCA
rotation, scale/offset compensation, and fixed-length resampling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateGeometry
from .model import NormalizedSignature, RawSignature


@dataclass(frozen=True)
class PreprocessConfig:
    """Normalization settings. P is the number of vertical time sections."""

    P: int = 2

    def __post_init__(self):
        if self.P < 1:
            raise ValueError("P must be >= 1")


@dataclass(frozen=True)
class AlignmentMap:
    """Monotone full-path correspondence between base and signature indices.

    Indices are 0-based; the path starts at (0, 0) and ends at
    (K_base - 1, K_sig - 1).
    """

    pairs: tuple  # of (k_base, k_sig)

    def base_groups(self, k_base_len: int):
        """For each base index, the list of signature indices paired with it."""
        groups = [[] for _ in range(k_base_len)]
        for kb, ks in self.pairs:
            groups[kb].append(ks)
        return groups


def derive_velocity(sig: RawSignature) -> np.ndarray:
    """Pen speed from finite differences of the trajectory; v[0] copies v[1]."""
    dt = np.diff(sig.t)
    ds = np.hypot(np.diff(sig.x), np.diff(sig.y))
    v = np.empty(len(sig))
    v[1:] = ds / dt
    v[0] = v[1]
    return v


def _zscore(a: np.ndarray) -> np.ndarray:
    std = a.std()
    if std == 0:
        return np.zeros_like(a)
    return (a - a.mean()) / std


def _dtw_matrix(v_b, z_b, v_s, z_s):
    """Local cost: sum of absolute differences of the z-scored channels."""
    cost = np.abs(v_b[:, None] - v_s[None, :])
    if z_b is not None:
        cost = cost + np.abs(z_b[:, None] - z_s[None, :])
    return cost


def _dtw(cost: np.ndarray):
    """Accumulated-cost DP with steps {(1,0),(0,1),(1,1)} and traceback."""
    n, m = cost.shape
    acc = np.full((n + 1, m + 1), np.inf)
    acc[0, 0] = 0.0
    for i in range(n):
        row = acc[i + 1]
        prev = acc[i]
        c = cost[i]
        for j in range(m):
            row[j + 1] = c[j] + min(prev[j], prev[j + 1], row[j])
    # traceback from (n-1, m-1)
    i, j = n - 1, m - 1
    path = [(i, j)]
    while i > 0 or j > 0:
        moves = (
            (acc[i, j], i - 1, j - 1),
            (acc[i, j + 1], i - 1, j),
            (acc[i + 1, j], i, j - 1),
        )
        best = min(
            (m for m in moves if m[1] >= 0 and m[2] >= 0),
            key=lambda m: m[0],
        )
        i, j = best[1], best[2]
        path.append((i, j))
    path.reverse()
    return acc[n, m], path


def dtw_cost(v_b, z_b, v_s, z_s) -> float:
    """Minimum alignment cost over the z-scored dynamics channels."""
    cost = _dtw_matrix(_zscore(v_b), None if z_b is None else _zscore(z_b),
                       _zscore(v_s), None if z_s is None else _zscore(z_s))
    total, _ = _dtw(cost)
    return total


def dtw_align(sig_v, sig_z, base_v, base_z) -> AlignmentMap:
    """Minimum-cost monotone full-path alignment of signature to base.

    Pressure may be None on both sides (shape-only deployment), in which
    case the cost uses velocity alone.
    """
    cost = _dtw_matrix(_zscore(base_v), None if base_z is None else _zscore(base_z),
                       _zscore(sig_v), None if sig_z is None else _zscore(sig_z))
    _, path = _dtw(cost)
    return AlignmentMap(pairs=tuple(path))


def select_base(dynamics: list) -> tuple[int, bool]:
    """Pick the reference whose total DTW distance to the others is smallest.

    dynamics is a list of (v, z) channel pairs. Returns (index, degenerate)
    where degenerate flags a set whose pairwise distances are all zero.
    """
    J = len(dynamics)
    if J < 2:
        raise ValueError("need at least 2 reference signatures")
    costs = np.zeros((J, J))
    for a in range(J):
        for b in range(a + 1, J):
            va, za = dynamics[a]
            vb, zb = dynamics[b]
            costs[a, b] = costs[b, a] = dtw_cost(va, za, vb, zb)
    totals = costs.sum(axis=1)
    degenerate = bool(np.all(totals == 0.0))
    return int(np.argmin(totals)), degenerate


def resample_linear(values: np.ndarray, target_len: int) -> np.ndarray:
    """Linear resampling onto target_len evenly spaced positions."""
    n = len(values)
    if n == target_len:
        return values.copy()
    src = np.linspace(0.0, 1.0, n)
    dst = np.linspace(0.0, 1.0, target_len)
    return np.interp(dst, src, values)


def target_length(k_base: int, P: int) -> int:
    """Nearest multiple of 2·P at or above k_base (divisibility requirement)."""
    step = 2 * P
    return int(math.ceil(k_base / step) * step)


def warp_to_base(channels: dict, amap: AlignmentMap, k_base: int, target_K: int) -> dict:
    """Match channels onto the base timeline, then resample to target_K.

    Many-to-one collisions collapse to the arithmetic mean of the paired
    signature samples.
    """
    groups = amap.base_groups(k_base)
    out = {}
    for name, values in channels.items():
        values = np.asarray(values, dtype=float)
        matched = np.array([values[idx].mean() for idx in groups])
        out[name] = resample_linear(matched, target_K)
    return out


def normalize_geometry(sig: NormalizedSignature) -> NormalizedSignature:
    """Canonical pose: centroid at origin, principal axis horizontal,
    RMS radius 1, pressure rescaled to [0,1]."""
    x = sig.x - sig.x.mean()
    y = sig.y - sig.y.mean()
    pts = np.column_stack([x, y])
    if np.allclose(pts, 0.0):
        raise DegenerateGeometry("all trajectory points coincide")
    cov = pts.T @ pts / len(pts)
    eigvals, eigvecs = np.linalg.eigh(cov)
    axis = eigvecs[:, np.argmax(eigvals)]
    proj = pts @ axis
    # sign convention: the point of largest magnitude projects positively
    if proj[np.argmax(np.abs(proj))] < 0:
        axis = -axis
    c, s = axis
    xr = x * c + y * s
    yr = -x * s + y * c
    scale = np.sqrt(np.mean(xr**2 + yr**2))
    xr /= scale
    yr /= scale
    v = sig.v / scale
    z = sig.z
    z_span = z.max() - z.min()
    if z_span == 0:
        z = np.full_like(z, 0.5)
    else:
        z = (z - z.min()) / z_span
    return NormalizedSignature(x=xr, y=yr, v=v, z=z)


def _raw_channels(sig: RawSignature) -> dict:
    return {"x": sig.x, "y": sig.y, "v": derive_velocity(sig), "z": sig.p}


def normalize_set(references: list, cfg: PreprocessConfig = PreprocessConfig()):
    """Full Fig.-2 style pipeline over a reference set.

    Returns (jbase, normalized list, degenerate flag); every output shares
    the same length K, divisible by 2·P.
    """
    chans = [_raw_channels(sig) for sig in references]
    jbase, degenerate = select_base([(c["v"], c["z"]) for c in chans])
    base = chans[jbase]
    k_base = len(base["v"])
    target_K = target_length(k_base, cfg.P)
    out = []
    for c in chans:
        amap = dtw_align(c["v"], c["z"], base["v"], base["z"])
        warped = warp_to_base(c, amap, k_base, target_K)
        out.append(normalize_geometry(NormalizedSignature(**warped)))
    return jbase, out, degenerate


def normalize_against_base(test: RawSignature, base: NormalizedSignature,
                           shape_only: bool = False) -> NormalizedSignature:
    """Normalize a test signature onto an enrolled base (test phase).

    In shape_only mode the DTW cost drops the pressure channel; the base
    length is already a valid target so no length change occurs.
    """
    c = _raw_channels(test)
    if shape_only:
        amap = dtw_align(c["v"], None, base.v, None)
    else:
        amap = dtw_align(c["v"], c["z"], base.v, base.z)
    warped = warp_to_base(c, amap, base.K, base.K)
    return normalize_geometry(NormalizedSignature(**warped))
