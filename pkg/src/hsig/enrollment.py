"""Training phase: templates, tolerance radii, stability measures,
partition weights, and assembly of the per-user profile."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyPartition
from .model import SIGMA_EPS, UserProfile, cell_keys
from .partitioning import build_partition_maps, extract_fragments
from .preprocess import PreprocessConfig, normalize_set


@dataclass(frozen=True)
class EnrollmentParams:
    """Tunable enrollment parameters.

    delta scales the per-cell tolerance radius (>= 1); mu_min anchors the
    Gaussian membership at that radius; cth is the acceptance threshold.
    """

    delta: float = 1.0
    mu_min: float = 0.01
    cth: float = 0.5
    P: int = 2

    def __post_init__(self):
        if self.delta < 1.0:
            raise ValueError("delta must be >= 1")
        if not (0.0 < self.mu_min < 1.0):
            raise ValueError("mu_min must lie in (0,1)")
        if not (0.0 <= self.cth <= 1.0):
            raise ValueError("cth must lie in [0,1]")
        if self.P < 1:
            raise ValueError("P must be >= 1")


def build_template(fragments: list) -> np.ndarray:
    """Pointwise mean of the reference fragments of one cell."""
    if not fragments:
        return np.array([])
    return np.mean(np.stack([np.asarray(f, dtype=float) for f in fragments]), axis=0)


def compute_dmax(fragments: list, template: np.ndarray, delta: float = 1.0) -> float:
    """Tolerance radius: delta-scaled mean absolute deviation from the template."""
    kc = len(template)
    if kc == 0:
        raise EmptyPartition("dmax undefined for an empty cell")
    J = len(fragments)
    total = sum(float(np.abs(np.asarray(f) - template).sum()) for f in fragments)
    return delta * total / (J * kc)


def compute_sigma_bar(fragments: list, template: np.ndarray) -> float:
    """Average per-sample standard deviation of the references around the template."""
    kc = len(template)
    if kc == 0:
        raise EmptyPartition("sigma undefined for an empty cell")
    stacked = np.stack([np.asarray(f, dtype=float) for f in fragments])
    per_sample = np.sqrt(np.mean((stacked - template) ** 2, axis=0))
    return float(per_sample.mean())


def compute_weights(sigma_bars: dict) -> dict:
    """Stability weights: 1 - sigma/max(sigma); empty cells get weight 0.

    A None sigma marks an empty cell. If every populated cell has zero
    dispersion the weights degenerate to 1.
    """
    populated = {k: s for k, s in sigma_bars.items() if s is not None}
    if not populated:
        raise EmptyPartition("no populated cells")
    s_max = max(populated.values())
    weights = {}
    for key, sigma in sigma_bars.items():
        if sigma is None:
            weights[key] = 0.0
        elif s_max <= SIGMA_EPS:  # identical references up to rounding
            weights[key] = 1.0
        else:
            weights[key] = 1.0 - sigma / s_max
    return weights


def enroll(references: list, params: EnrollmentParams = EnrollmentParams(),
           user_id: str = "user") -> UserProfile:
    """Run the full training phase over a set of reference signatures."""
    if len(references) < 2:
        raise ValueError("enrollment needs at least 2 reference signatures")
    jbase, normalized, degenerate = normalize_set(
        references, PreprocessConfig(P=params.P))
    base = normalized[jbase]
    maps = build_partition_maps(base, params.P)
    per_ref = [extract_fragments(sig, maps) for sig in normalized]

    templates, dmax, sigma_bar, sigmas_for_weights = {}, {}, {}, {}
    for key in cell_keys(params.P):
        fragments = [fr[key] for fr in per_ref]
        template = build_template(fragments)
        templates[key] = template
        if len(template) == 0:
            dmax[key] = 0.0
            sigma_bar[key] = 0.0
            sigmas_for_weights[key] = None
        else:
            dmax[key] = compute_dmax(fragments, template, params.delta)
            sigma_bar[key] = compute_sigma_bar(fragments, template)
            sigmas_for_weights[key] = sigma_bar[key]
    weights = compute_weights(sigmas_for_weights)

    return UserProfile(
        user_id=user_id,
        base=base,
        K=base.K,
        P=params.P,
        partition_maps=maps,
        templates=templates,
        weights=weights,
        dmax=dmax,
        sigma_bar=sigma_bar,
        delta=params.delta,
        cth=params.cth,
        mu_min=params.mu_min,
        degenerate=degenerate,
    ).validate()
