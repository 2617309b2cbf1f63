"""Core data types, signature file parsing, and profile persistence."""

from __future__ import annotations

import io
import json
import struct
import zlib
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    CorruptProfile,
    InvariantViolation,
    MalformedInput,
    NonMonotonicTime,
    SchemaMismatch,
    TooFewSamples,
)

SIGNALS = ("v", "z")
TRAJECTORIES = ("x", "y")

PROFILE_MAGIC = b"HSIGPROF"
PROFILE_VERSION = 1

# dispersion below this (in normalized shape units) counts as zero
SIGMA_EPS = 1e-12


def cell_keys(P: int):
    """Canonical ordering of the (signal, trajectory, section, band) cells."""
    for s in SIGNALS:
        for a in TRAJECTORIES:
            for p in range(1, P + 1):
                for r in (1, 2):
                    yield (s, a, p, r)


@dataclass(frozen=True)
class RawSignature:
    """Time-stamped pen samples as acquired or drawn.

    t is in milliseconds, x/y in device units, p is pen pressure (0 = pen up).
    """

    t: np.ndarray
    x: np.ndarray
    y: np.ndarray
    p: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("t", "x", "y", "p"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        n = len(self.t)
        if not (len(self.x) == len(self.y) == len(self.p) == n):
            raise MalformedInput("sample channels have unequal lengths")
        if n < 2:
            raise TooFewSamples(f"need at least 2 samples, got {n}")
        if not np.all(np.diff(self.t) > 0):
            raise NonMonotonicTime("timestamps must be strictly increasing")
        if np.any(self.p < 0):
            raise MalformedInput("pressure values must be >= 0")

    def __len__(self):
        return len(self.t)


@dataclass(frozen=True)
class NormalizedSignature:
    """Fixed-length aligned trajectories plus dynamics channels."""

    x: np.ndarray
    y: np.ndarray
    v: np.ndarray
    z: np.ndarray

    def __post_init__(self):
        for name in ("x", "y", "v", "z"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        n = len(self.x)
        if not (len(self.y) == len(self.v) == len(self.z) == n):
            raise InvariantViolation("normalized channels have unequal lengths")

    def __len__(self):
        return len(self.x)

    @property
    def K(self) -> int:
        return len(self.x)


@dataclass(frozen=True)
class PartitionMap:
    """Section assignment for one dynamics signal of the base signature."""

    pv: np.ndarray  # 1..P per sample
    ph: np.ndarray  # 1 or 2 per sample
    section_averages: np.ndarray  # length P
    section_counts: np.ndarray  # length P

    def __post_init__(self):
        object.__setattr__(self, "pv", np.asarray(self.pv, dtype=int))
        object.__setattr__(self, "ph", np.asarray(self.ph, dtype=int))
        object.__setattr__(self, "section_averages", np.asarray(self.section_averages, dtype=float))
        object.__setattr__(self, "section_counts", np.asarray(self.section_counts, dtype=int))


@dataclass(frozen=True)
class UserProfile:
    """Complete per-user verification state produced by enrollment."""

    user_id: str
    base: NormalizedSignature
    K: int
    P: int
    partition_maps: dict  # signal -> PartitionMap
    templates: dict  # (s, a, p, r) -> np.ndarray
    weights: dict  # (s, a, p, r) -> float
    dmax: dict  # (s, a, p, r) -> float
    sigma_bar: dict  # (s, a, p, r) -> float
    delta: float = 1.0
    cth: float = 0.5
    mu_min: float = 0.01
    degenerate: bool = False

    def validate(self):
        keys = list(cell_keys(self.P))
        expected = 4 * self.P * 2  # all (s, a, p, r) combinations
        for d in (self.templates, self.weights, self.dmax, self.sigma_bar):
            if set(d) != set(keys):
                raise InvariantViolation("cell key sets do not match configuration")
        if len(keys) != expected:
            raise InvariantViolation("unexpected cell count")
        for key in keys:
            w = self.weights[key]
            if not (0.0 <= w <= 1.0):
                raise InvariantViolation(f"weight {w} outside [0,1] at {key}")
            if self.dmax[key] < 0 or self.sigma_bar[key] < 0:
                raise InvariantViolation(f"negative tolerance at {key}")
        if self.delta < 1.0:
            raise InvariantViolation("delta must be >= 1")
        if not (0.0 <= self.cth <= 1.0):
            raise InvariantViolation("cth must lie in [0,1]")
        if not (0.0 < self.mu_min < 1.0):
            raise InvariantViolation("mu_min must lie in (0,1)")
        if self.K != self.base.K:
            raise InvariantViolation("K does not match base signature length")
        sigmas = np.array([self.sigma_bar[k] for k in keys])
        weights = np.array([self.weights[k] for k in keys])
        if np.any(sigmas > SIGMA_EPS) and not np.any(weights == 0.0):
            raise InvariantViolation("weight normalization must zero the least stable cell")
        return self


@dataclass(frozen=True)
class VerificationResult:
    """Outcome of verifying one test signature against a profile."""

    dtst: dict  # (s, a, p, r) -> float
    similarity: float
    genuine: bool
    threshold_used: float


# ---------------------------------------------------------------------------
# Parsing

def _float(token: str, context: str) -> float:
    try:
        return float(token)
    except ValueError:
        raise MalformedInput(f"bad numeric value {token!r} in {context}") from None


def _parse_svc(text: str) -> RawSignature:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise MalformedInput("empty svc input")
    try:
        n = int(lines[0].split()[0])
    except (ValueError, IndexError):
        raise MalformedInput("svc header must be a sample count") from None
    rows = lines[1:]
    if len(rows) != n:
        raise MalformedInput(f"svc header says {n} samples, found {len(rows)}")
    cols = []
    for ln in rows:
        parts = ln.split()
        if len(parts) < 4:
            raise MalformedInput(f"svc row needs 4 columns: {ln!r}")
        cols.append([_float(tok, "svc row") for tok in parts[:4]])
    arr = np.array(cols, dtype=float)
    # svc rows are "x y t p"
    return RawSignature(t=arr[:, 2], x=arr[:, 0], y=arr[:, 1], p=arr[:, 3])


def _parse_csv(text: str) -> RawSignature:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise MalformedInput("empty csv input")
    header = [h.strip() for h in lines[0].split(",")]
    if header != ["t", "x", "y", "p"]:
        raise MalformedInput(f"csv header must be 't,x,y,p', got {lines[0]!r}")
    cols = []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != 4:
            raise MalformedInput(f"csv row needs 4 columns: {ln!r}")
        cols.append([_float(tok, "csv row") for tok in parts])
    if not cols:
        raise TooFewSamples("csv contains no data rows")
    arr = np.array(cols, dtype=float)
    return RawSignature(t=arr[:, 0], x=arr[:, 1], y=arr[:, 2], p=arr[:, 3])


def _parse_json(text: str) -> RawSignature:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"invalid json: {exc}") from None
    if not isinstance(doc, dict) or "samples" not in doc:
        raise MalformedInput("json signature must contain a 'samples' array")
    samples = doc["samples"]
    if not isinstance(samples, list):
        raise MalformedInput("'samples' must be an array")
    try:
        t = [float(s["t"]) for s in samples]
        x = [float(s["x"]) for s in samples]
        y = [float(s["y"]) for s in samples]
        p = [float(s["p"]) for s in samples]
    except (TypeError, KeyError, ValueError):
        raise MalformedInput("each sample needs numeric t, x, y, p") from None
    meta = doc.get("meta") or {}
    return RawSignature(t=t, x=x, y=y, p=p, meta=meta)


_PARSERS = {"svc": _parse_svc, "csv": _parse_csv, "json": _parse_json}


def parse_signature(text: str, format: str) -> RawSignature:
    """Parse a signature from one of the three supported text layouts."""
    if not text:
        raise MalformedInput("empty input")
    if format not in _PARSERS:
        raise MalformedInput(f"unknown format {format!r}")
    return _PARSERS[format](text)


def serialize_signature(sig: RawSignature, format: str) -> str:
    """Inverse of parse_signature; parse(serialize(sig)) reproduces sig."""
    rows = zip(sig.t.tolist(), sig.x.tolist(), sig.y.tolist(), sig.p.tolist())
    if format == "svc":
        out = io.StringIO()
        out.write(f"{len(sig)}\n")
        for t, x, y, p in rows:
            out.write(f"{x!r} {y!r} {t!r} {p!r}\n")
        return out.getvalue()
    if format == "csv":
        out = io.StringIO()
        out.write("t,x,y,p\n")
        for t, x, y, p in rows:
            out.write(f"{t!r},{x!r},{y!r},{p!r}\n")
        return out.getvalue()
    if format == "json":
        samples = [{"t": t, "x": x, "y": y, "p": p} for t, x, y, p in rows]
        return json.dumps({"samples": samples, "meta": sig.meta})
    raise MalformedInput(f"unknown format {format!r}")


# ---------------------------------------------------------------------------
# Profile persistence

def _key_to_str(key) -> str:
    s, a, p, r = key
    return f"{s}:{a}:{p}:{r}"


def _str_to_key(text: str):
    s, a, p, r = text.split(":")
    return (s, a, int(p), int(r))


def _sig_to_doc(sig: NormalizedSignature) -> dict:
    return {c: getattr(sig, c).tolist() for c in ("x", "y", "v", "z")}


def _sig_from_doc(doc: dict) -> NormalizedSignature:
    return NormalizedSignature(**{c: doc[c] for c in ("x", "y", "v", "z")})


def save_profile(profile: UserProfile) -> bytes:
    """Serialize a profile into the versioned, checksummed container."""
    profile.validate()
    doc = {
        "user_id": profile.user_id,
        "K": profile.K,
        "P": profile.P,
        "delta": profile.delta,
        "cth": profile.cth,
        "mu_min": profile.mu_min,
        "degenerate": profile.degenerate,
        "base": _sig_to_doc(profile.base),
        "maps": {
            s: {
                "pv": m.pv.tolist(),
                "ph": m.ph.tolist(),
                "avg": m.section_averages.tolist(),
                "counts": m.section_counts.tolist(),
            }
            for s, m in profile.partition_maps.items()
        },
        "cells": {
            _key_to_str(k): {
                "template": np.asarray(profile.templates[k], dtype=float).tolist(),
                "weight": float(profile.weights[k]),
                "dmax": float(profile.dmax[k]),
                "sigma_bar": float(profile.sigma_bar[k]),
            }
            for k in cell_keys(profile.P)
        },
    }
    payload = json.dumps(doc, separators=(",", ":")).encode()
    header = PROFILE_MAGIC + struct.pack(">II", PROFILE_VERSION, len(payload))
    return header + payload + struct.pack(">I", zlib.crc32(payload))


def load_profile(blob: bytes) -> UserProfile:
    """Parse a profile container, validating magic, version, and checksum."""
    head_len = len(PROFILE_MAGIC) + 8
    if len(blob) < head_len + 4:
        raise CorruptProfile("container truncated")
    if blob[: len(PROFILE_MAGIC)] != PROFILE_MAGIC:
        raise CorruptProfile("bad magic")
    version, payload_len = struct.unpack(">II", blob[len(PROFILE_MAGIC) : head_len])
    if version != PROFILE_VERSION:
        raise SchemaMismatch(f"unsupported profile version {version}")
    payload = blob[head_len : head_len + payload_len]
    if len(payload) != payload_len or len(blob) != head_len + payload_len + 4:
        raise CorruptProfile("container truncated")
    (checksum,) = struct.unpack(">I", blob[head_len + payload_len :])
    if zlib.crc32(payload) != checksum:
        raise CorruptProfile("checksum mismatch")
    try:
        doc = json.loads(payload)
        cells = {_str_to_key(k): c for k, c in doc["cells"].items()}
        profile = UserProfile(
            user_id=doc["user_id"],
            base=_sig_from_doc(doc["base"]),
            K=doc["K"],
            P=doc["P"],
            partition_maps={
                s: PartitionMap(
                    pv=m["pv"],
                    ph=m["ph"],
                    section_averages=m["avg"],
                    section_counts=m["counts"],
                )
                for s, m in doc["maps"].items()
            },
            templates={k: np.array(c["template"], dtype=float) for k, c in cells.items()},
            weights={k: c["weight"] for k, c in cells.items()},
            dmax={k: c["dmax"] for k, c in cells.items()},
            sigma_bar={k: c["sigma_bar"] for k, c in cells.items()},
            delta=doc["delta"],
            cth=doc["cth"],
            mu_min=doc["mu_min"],
            degenerate=doc.get("degenerate", False),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaMismatch(f"malformed profile payload: {exc}") from None
    return profile.validate()
