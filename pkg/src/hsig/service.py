"""Minimal HTTP verification service.

A directory-backed profile store plus enroll/verify endpoints consumed by
the capture UI and by scripts. Raw templates never leave the server.
"""

from __future__ import annotations

import os
import re
import tempfile
import threading
from pathlib import Path

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .classifier import verify
from .enrollment import EnrollmentParams, enroll
from .errors import HsigError, MalformedInput
from .model import (
    RawSignature,
    cell_keys,
    load_profile,
    parse_signature,
    save_profile,
    serialize_signature,
)

_USER_ID = re.compile(r"^[A-Za-z0-9._-]{1,64}$")


class ProfileStore:
    """One profile container per user id, stored as files in a directory.

    Writes go through write-temp-then-rename so concurrent readers see
    either the old profile or the complete new one, never a partial file.
    """

    def __init__(self, root):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()

    def _path(self, user_id: str) -> Path:
        if not _USER_ID.match(user_id):
            raise MalformedInput(f"invalid user id {user_id!r}")
        return self.root / f"{user_id}.hsigprof"

    def put(self, user_id: str, blob: bytes):
        path = self._path(user_id)
        with self._lock:
            fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
            try:
                with os.fdopen(fd, "wb") as fh:
                    fh.write(blob)
                os.replace(tmp, path)
            finally:
                if os.path.exists(tmp):
                    os.unlink(tmp)

    def get(self, user_id: str) -> bytes | None:
        path = self._path(user_id)
        if not path.exists():
            return None
        return path.read_bytes()


class SignatureBody(BaseModel):
    samples: list[dict] = Field(min_length=2)
    meta: dict = {}


class EnrollBody(BaseModel):
    signatures: list[SignatureBody]
    P: int = 2
    delta: float = 1.0
    mu_min: float = 0.01
    cth: float = 0.5


class VerifyBody(BaseModel):
    signature: SignatureBody
    mode: str = "full"


def _to_raw(body: SignatureBody) -> RawSignature:
    import json

    return parse_signature(
        json.dumps({"samples": body.samples, "meta": body.meta}), "json")


def _cell_entries(profile, values: dict) -> list[dict]:
    return [
        {"s": s, "a": a, "p": p, "r": r, "value": float(values[(s, a, p, r)])}
        for s, a, p, r in cell_keys(profile.P)
    ]


def create_app(store_root=None) -> FastAPI:
    store = ProfileStore(store_root or os.environ.get("HSIG_STORE", "hsig-profiles"))
    app = FastAPI(title="hsig verification service")
    app.state.store = store

    @app.post("/users/{user_id}/enroll", status_code=201)
    def enroll_user(user_id: str, body: EnrollBody):
        if len(body.signatures) < 2:
            raise HTTPException(422, "need at least 2 reference signatures")
        try:
            refs = [_to_raw(sig) for sig in body.signatures]
            params = EnrollmentParams(delta=body.delta, mu_min=body.mu_min,
                                      cth=body.cth, P=body.P)
            profile = enroll(refs, params, user_id=user_id)
            store.put(user_id, save_profile(profile))
        except (MalformedInput, ValueError) as exc:
            raise HTTPException(400, str(exc)) from None
        except HsigError as exc:
            raise HTTPException(500, str(exc)) from None
        return {
            "user_id": user_id,
            "K": profile.K,
            "P": profile.P,
            "weights": _cell_entries(profile, profile.weights),
            "dmax": _cell_entries(profile, profile.dmax),
        }

    @app.post("/users/{user_id}/verify")
    def verify_user(user_id: str, body: VerifyBody):
        try:
            blob = store.get(user_id)
        except MalformedInput as exc:
            raise HTTPException(400, str(exc)) from None
        if blob is None:
            raise HTTPException(404, f"unknown user {user_id}")
        profile = load_profile(blob)
        mode = body.mode.replace("-", "_")
        if mode not in ("full", "shape_only"):
            raise HTTPException(400, f"unknown mode {body.mode!r}")
        try:
            sig = _to_raw(body.signature)
            result = verify(sig, profile, mode=mode)
        except (MalformedInput, ValueError) as exc:
            raise HTTPException(400, str(exc)) from None
        except HsigError as exc:
            raise HTTPException(500, str(exc)) from None
        return {
            "similarity": result.similarity,
            "genuine": result.genuine,
            "threshold": result.threshold_used,
            "dtst": _cell_entries(profile, result.dtst),
        }

    @app.get("/users/{user_id}/profile")
    def profile_metadata(user_id: str):
        try:
            blob = store.get(user_id)
        except MalformedInput as exc:
            raise HTTPException(400, str(exc)) from None
        if blob is None:
            raise HTTPException(404, f"unknown user {user_id}")
        profile = load_profile(blob)
        # metadata only: templates are biometric secrets and stay server-side
        return {
            "user_id": profile.user_id,
            "K": profile.K,
            "P": profile.P,
            "cth": profile.cth,
            "delta": profile.delta,
            "mu_min": profile.mu_min,
            "weights": _cell_entries(profile, profile.weights),
        }

    @app.post("/echo")
    def echo(body: SignatureBody):
        # debugging aid for clients: round-trips a trace through the parser
        import json

        sig = _to_raw(body)
        return json.loads(serialize_signature(sig, "json"))

    return app


def main():
    import uvicorn

    addr = os.environ.get("HSIG_ADDR", "127.0.0.1:8080")
    host, _, port = addr.partition(":")
    uvicorn.run(create_app(), host=host, port=int(port or "8080"))


if __name__ == "__main__":
    main()
