"""FAR/FRR evaluation protocol, weight averaging across users, and a
synthetic signer generator for desk-scale testing."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .classifier import verify
from .enrollment import EnrollmentParams, enroll
from .errors import EmptyScoreList, InsufficientSignatures, MixedConfigurations
from .model import RawSignature, cell_keys


@dataclass(frozen=True)
class ProtocolConfig:
    """Repeated random-split evaluation settings."""

    repetitions: int = 5
    references_per_user: int = 5
    rng_seed: int = 0
    P_values: tuple = (2, 3, 4)
    delta: float = 1.0
    mu_min: float = 0.01
    cth: float = 0.5
    mode: str = "full"

    def __post_init__(self):
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        if self.references_per_user < 2:
            raise ValueError("references_per_user must be >= 2")


@dataclass
class EvalReport:
    """Aggregated evaluation results, one entry per P configuration."""

    rows: list = field(default_factory=list)  # dicts: P, R, far, frr, avg_error
    average_weights: dict = field(default_factory=dict)  # P -> {(s,a,p,r): w}
    per_user_scores: dict = field(default_factory=dict)  # P -> {user: (genuine, forged)}
    eer: dict = field(default_factory=dict)  # P -> (eer, cth_at_eer), if swept

    def summary_table(self) -> str:
        lines = [f"{'P':>3} {'R':>3} {'Average FAR':>12} {'Average FRR':>12} {'Average error':>14}"]
        for row in self.rows:
            lines.append(
                f"{row['P']:>3} {row['R']:>3} "
                f"{100 * row['far']:>11.2f}% {100 * row['frr']:>11.2f}% "
                f"{100 * row['avg_error']:>13.2f}%"
            )
        return "\n".join(lines)

    def key_values(self) -> str:
        lines = []
        for row in self.rows:
            prefix = f"P={row['P']}"
            lines.append(f"{prefix} R={row['R']} far={row['far']!r} "
                         f"frr={row['frr']!r} avg_error={row['avg_error']!r}")
            if row["P"] in self.eer:
                eer, cth = self.eer[row["P"]]
                lines.append(f"{prefix} eer={eer!r} cth_at_eer={cth!r}")
        return "\n".join(lines)

    def weight_rows(self) -> str:
        lines = ["s a p r weight"]
        for P, weights in sorted(self.average_weights.items()):
            for (s, a, p, r), w in weights.items():
                lines.append(f"{s} {a} {p} {r} {w!r}")
        return "\n".join(lines)


def compute_far_frr(genuine_scores, forgery_scores, cth: float):
    """Exact acceptance/rejection fractions at threshold cth."""
    genuine_scores = list(genuine_scores)
    forgery_scores = list(forgery_scores)
    if not genuine_scores or not forgery_scores:
        raise EmptyScoreList("both score lists must be nonempty")
    far = sum(s > cth for s in forgery_scores) / len(forgery_scores)
    frr = sum(s <= cth for s in genuine_scores) / len(genuine_scores)
    return far, frr


def average_weights(profiles: list) -> dict:
    """Arithmetic mean of the per-cell weights across user profiles."""
    if not profiles:
        raise MixedConfigurations("no profiles to average")
    P = profiles[0].P
    if any(pr.P != P for pr in profiles):
        raise MixedConfigurations("profiles differ in P")
    keys = list(cell_keys(P))
    return {
        key: float(np.mean([pr.weights[key] for pr in profiles])) for key in keys
    }


# ---------------------------------------------------------------------------
# Synthetic data

@dataclass(frozen=True)
class SyntheticSpec:
    """Controls for the synthetic signer generator."""

    strokes: int = 4  # number of sinusoidal components per axis
    K_raw: int = 160
    genuine_count: int = 15
    forgery_count: int = 10
    genuine_noise: float = 0.01  # relative amplitude of genuine variation
    forgery_distortion: float = 0.05  # relative amplitude of forgery distortion


def _smooth_noise(rng, n, amplitude, window=9):
    noise = rng.normal(0.0, amplitude, n + window)
    kernel = np.ones(window) / window
    return np.convolve(noise, kernel, mode="same")[:n] * np.sqrt(window)


def _time_warp(rng, t, strength):
    # monotone reparameterization: t + small smooth sinusoidal offset
    phase = rng.uniform(0, 2 * np.pi)
    cycles = rng.uniform(0.5, 1.5)
    u = t / t[-1]
    warped = u + strength * np.sin(2 * np.pi * cycles * u + phase) / (2 * np.pi * cycles)
    warped = np.sort(warped)
    return warped * t[-1]


def generate_synthetic_user(seed: int, spec: SyntheticSpec = SyntheticSpec()):
    """Deterministic per-seed signer: genuine copies plus skilled forgeries.

    Genuine copies perturb a smooth base curve with small-amplitude noise
    and a mild time warp; forgeries add larger shape distortion plus
    altered velocity and pressure profiles.
    """
    if not spec.forgery_distortion > spec.genuine_noise > 0:
        raise ValueError("need forgery_distortion > genuine_noise > 0")
    rng = np.random.default_rng([seed, 0x5167])
    n = spec.K_raw
    u = np.linspace(0.0, 1.0, n)
    t = u * 1000.0  # milliseconds

    freqs = rng.uniform(0.5, 2.5, (2, spec.strokes))
    amps = rng.uniform(0.3, 1.0, (2, spec.strokes))
    amps[0] *= 3.0  # wide like a real signature; keeps the PCA pose stable
    phases = rng.uniform(0, 2 * np.pi, (2, spec.strokes))

    def curve(axis, uu):
        out = np.zeros_like(uu)
        for h in range(spec.strokes):
            out += amps[axis, h] * np.sin(2 * np.pi * freqs[axis, h] * uu + phases[axis, h])
        return out

    base_x, base_y = curve(0, u), curve(1, u)
    amplitude = max(np.ptp(base_x), np.ptp(base_y))
    press_phase = rng.uniform(0, 2 * np.pi)
    base_p = 0.5 + 0.3 * np.sin(2 * np.pi * 1.3 * u + press_phase)

    def genuine_copy():
        tw = _time_warp(rng, t, 0.02)
        uu = tw / tw[-1]
        sx = curve(0, uu) + _smooth_noise(rng, n, spec.genuine_noise * amplitude)
        sy = curve(1, uu) + _smooth_noise(rng, n, spec.genuine_noise * amplitude)
        sp = np.clip(base_p + _smooth_noise(rng, n, spec.genuine_noise), 0.0, 1.0)
        return RawSignature(t=t, x=sx, y=sy, p=sp)

    def forgery_copy():
        # altered pace: convex/concave time reparameterization
        gamma = rng.uniform(0.6, 1.6)
        uu = u**gamma
        sx = curve(0, uu) + _smooth_noise(rng, n, spec.forgery_distortion * amplitude)
        sy = curve(1, uu) + _smooth_noise(rng, n, spec.forgery_distortion * amplitude)
        sp = np.clip(
            0.5 + 0.3 * np.sin(2 * np.pi * rng.uniform(0.8, 2.0) * u + rng.uniform(0, 2 * np.pi))
            + _smooth_noise(rng, n, spec.forgery_distortion),
            0.0, 1.0,
        )
        return RawSignature(t=t, x=sx, y=sy, p=sp)

    genuine = [genuine_copy() for _ in range(spec.genuine_count)]
    forgeries = [forgery_copy() for _ in range(spec.forgery_count)]
    return genuine, forgeries


# ---------------------------------------------------------------------------
# Protocol

def _score_user(genuine, forgeries, P, rep, user_index, cfg: ProtocolConfig):
    """One enrollment/test split for one user; returns score lists."""
    rng = np.random.default_rng([cfg.rng_seed, P, rep, user_index])
    n_refs = cfg.references_per_user
    if len(genuine) < n_refs + 1:
        raise InsufficientSignatures(
            f"user {user_index}: need >= {n_refs + 1} genuine signatures")
    if not forgeries:
        raise InsufficientSignatures(f"user {user_index}: need >= 1 forgery")
    ref_idx = rng.choice(len(genuine), size=n_refs, replace=False)
    refs = [genuine[i] for i in ref_idx]
    rest = [g for i, g in enumerate(genuine) if i not in set(ref_idx.tolist())]
    params = EnrollmentParams(delta=cfg.delta, mu_min=cfg.mu_min, cth=cfg.cth, P=P)
    profile = enroll(refs, params, user_id=str(user_index))
    g_scores = [verify(sig, profile, mode=cfg.mode).similarity for sig in rest]
    f_scores = [verify(sig, profile, mode=cfg.mode).similarity for sig in forgeries]
    return g_scores, f_scores, profile


def run_protocol(dataset: dict, cfg: ProtocolConfig = ProtocolConfig(),
                 cth_sweep: bool = False) -> EvalReport:
    """Repeated random-split protocol over a per-user dataset.

    dataset maps user id -> (genuine list, forgery list). Error rates are
    averaged over users and repetitions in stable user-id order.
    """
    report = EvalReport()
    user_ids = sorted(dataset)
    for P in cfg.P_values:
        fars, frrs = [], []
        profiles = []
        per_user = {uid: ([], []) for uid in user_ids}
        for rep in range(cfg.repetitions):
            for idx, uid in enumerate(user_ids):
                genuine, forgeries = dataset[uid]
                g_scores, f_scores, profile = _score_user(
                    genuine, forgeries, P, rep, idx, cfg)
                far, frr = compute_far_frr(g_scores, f_scores, cfg.cth)
                fars.append(far)
                frrs.append(frr)
                profiles.append(profile)
                per_user[uid][0].extend(g_scores)
                per_user[uid][1].extend(f_scores)
        far = float(np.mean(fars))
        frr = float(np.mean(frrs))
        report.rows.append({
            "P": P, "R": 2, "far": far, "frr": frr,
            "avg_error": (far + frr) / 2.0,
        })
        report.average_weights[P] = average_weights(profiles)
        report.per_user_scores[P] = per_user
        if cth_sweep:
            report.eer[P] = _eer_scan(per_user)
    return report


def _eer_scan(per_user: dict):
    """Linear scan of cth over {0.00, 0.01, ..., 1.00}; closest FAR/FRR point."""
    best = None
    for step in range(101):
        cth = step / 100.0
        fars, frrs = [], []
        for g_scores, f_scores in per_user.values():
            far, frr = compute_far_frr(g_scores, f_scores, cth)
            fars.append(far)
            frrs.append(frr)
        far, frr = float(np.mean(fars)), float(np.mean(frrs))
        gap = abs(far - frr)
        if best is None or gap < best[0]:
            best = (gap, (far + frr) / 2.0, cth)
    return best[1], best[2]
