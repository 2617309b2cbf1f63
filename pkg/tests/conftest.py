"""Shared builders and independent oracles used across the test suite."""

import math

import numpy as np
import pytest

from hsig.model import RawSignature


def make_raw(x, y, t=None, p=None) -> RawSignature:
    x = np.asarray(x, dtype=float)
    if t is None:
        t = np.arange(len(x), dtype=float)
    if p is None:
        p = np.ones(len(x))
    return RawSignature(t=t, x=x, y=np.asarray(y, dtype=float), p=np.asarray(p))


def wavy_signature(rng, n=80, noise=0.0, pressure_noise=0.0) -> RawSignature:
    """Smooth two-lobe stroke with optional per-copy perturbation."""
    u = np.linspace(0.0, 1.0, n)
    # wide like a real signature so the principal axis is well separated
    x = 2.5 * np.sin(2 * np.pi * u) + 1.0 * np.sin(4 * np.pi * u + 0.7)
    y = 0.8 * np.cos(2 * np.pi * u) + 0.3 * np.sin(6 * np.pi * u + 0.2)
    p = 0.5 + 0.3 * np.sin(2 * np.pi * 1.3 * u)
    if noise:
        x = x + rng.normal(0, noise, n)
        y = y + rng.normal(0, noise, n)
    if pressure_noise:
        p = np.clip(p + rng.normal(0, pressure_noise, n), 0.0, 1.0)
    return RawSignature(t=u * 1000.0, x=x, y=y, p=p)


def reference_set(seed=0, J=5, n=80, noise=0.01):
    rng = np.random.default_rng(seed)
    return [wavy_signature(rng, n=n, noise=noise, pressure_noise=noise)
            for _ in range(J)]


# ---------------------------------------------------------------------------
# Independent oracles

def dtw_paths_bruteforce(cost):
    """Exhaustively enumerate monotone full paths; returns (min cost, best path).

    Steps are {(1,0),(0,1),(1,1)}; only feasible for tiny inputs.
    """
    n, m = cost.shape
    best = [math.inf, None]

    def walk(i, j, total, path):
        total += cost[i, j]
        if total >= best[0]:
            return
        path = path + [(i, j)]
        if i == n - 1 and j == m - 1:
            best[0], best[1] = total, path
            return
        if i + 1 < n and j + 1 < m:
            walk(i + 1, j + 1, total, path)
        if i + 1 < n:
            walk(i + 1, j, total, path)
        if j + 1 < m:
            walk(i, j + 1, total, path)

    walk(0, 0, 0.0, [])
    return best[0], best[1]


def similarity_bruteforce(dtst, dmax, weights, mu_min):
    """Explicit-loop expansion of the two-rule system output."""
    n1 = 1.0
    n2 = 1.0
    for d, dm, w in zip(dtst, dmax, weights):
        sigma = max(dm, 1e-9) / math.sqrt(abs(math.log(mu_min)))
        mu1 = math.exp(-((d - 0.0) / sigma) ** 2)
        mu2 = math.exp(-((d - dm) / sigma) ** 2)
        n1 *= 1.0 - w * (1.0 - mu1)
        n2 *= 1.0 - w * (1.0 - mu2)
    if n1 + n2 == 0.0:
        return 0.0
    return n1 / (n1 + n2)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
