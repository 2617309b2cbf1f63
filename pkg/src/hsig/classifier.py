"""Test phase: per-cell distances, the two-rule weighted-fuzzy similarity
score, and the genuine/forged decision."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import LengthMismatch
from .model import (
    NormalizedSignature,
    RawSignature,
    UserProfile,
    VerificationResult,
    cell_keys,
)
from .partitioning import extract_fragments
from .preprocess import normalize_against_base

# Width floor for perfectly stable cells (dmax = 0), in normalized shape units.
SIGMA_FLOOR = 1e-9


@dataclass(frozen=True)
class MembershipParams:
    """Gaussian antecedent parameters for one partition cell.

    The "high similarity" set is centred at 0, the "low similarity" set at
    dmax; both share a width chosen so the first set decays to mu_min
    exactly at dmax.
    """

    dmax: float
    mu_min: float

    @property
    def sigma(self) -> float:
        return max(self.dmax, SIGMA_FLOOR) / math.sqrt(abs(math.log(self.mu_min)))


def gaussian_membership(x: float, center: float, dmax: float, mu_min: float) -> float:
    """Gaussian membership with width tied to (dmax, mu_min)."""
    sigma = MembershipParams(dmax=dmax, mu_min=mu_min).sigma
    return math.exp(-(((x - center) / sigma) ** 2))


def weighted_tnorm(memberships, weights) -> float:
    """Algebraic weighted t-norm: product of 1 - w·(1 - a) over all arguments."""
    out = 1.0
    for a, w in zip(memberships, weights, strict=True):
        out *= 1.0 - w * (1.0 - a)
    return out


def partition_distances(test: NormalizedSignature, profile: UserProfile) -> dict:
    """Mean absolute distance of each test fragment to its template."""
    if test.K != profile.K:
        raise LengthMismatch(f"test length {test.K} != profile length {profile.K}")
    fragments = extract_fragments(test, profile.partition_maps)
    dtst = {}
    for key in cell_keys(profile.P):
        template = profile.templates[key]
        if len(template) == 0:
            dtst[key] = 0.0
        else:
            dtst[key] = float(np.abs(fragments[key] - template).mean())
    return dtst


def similarity(dtst: dict, profile: UserProfile) -> float:
    """Closed-form output of the two-rule system: N1 / (N1 + N2).

    N1 aggregates the "high similarity" memberships, N2 the "low
    similarity" ones, both through the weighted t-norm.
    """
    keys = list(cell_keys(profile.P))
    weights = [profile.weights[k] for k in keys]
    mu1 = [gaussian_membership(dtst[k], 0.0, profile.dmax[k], profile.mu_min)
           for k in keys]
    mu2 = [gaussian_membership(dtst[k], profile.dmax[k], profile.dmax[k],
                               profile.mu_min) for k in keys]
    n1 = weighted_tnorm(mu1, weights)
    n2 = weighted_tnorm(mu2, weights)
    if n1 + n2 == 0.0:
        return 0.0
    return n1 / (n1 + n2)


def verify(test: RawSignature, profile: UserProfile, mode: str = "full") -> VerificationResult:
    """Normalize a test signature against the profile's base and score it."""
    if mode not in ("full", "shape_only"):
        raise ValueError(f"unknown mode {mode!r}")
    normalized = normalize_against_base(test, profile.base,
                                        shape_only=(mode == "shape_only"))
    dtst = partition_distances(normalized, profile)
    score = similarity(dtst, profile)
    return VerificationResult(
        dtst=dtst,
        similarity=score,
        genuine=score > profile.cth,
        threshold_used=profile.cth,
    )
