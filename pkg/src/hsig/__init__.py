"""Dynamic handwritten-signature verification via hybrid partitioning."""

from .classifier import verify
from .enrollment import EnrollmentParams, enroll
from .estimator import SignatureVerifier
from .evaluation import ProtocolConfig, run_protocol
from .model import (
    NormalizedSignature,
    RawSignature,
    UserProfile,
    VerificationResult,
    load_profile,
    parse_signature,
    save_profile,
)

__all__ = [
    "EnrollmentParams",
    "NormalizedSignature",
    "ProtocolConfig",
    "RawSignature",
    "SignatureVerifier",
    "UserProfile",
    "VerificationResult",
    "enroll",
    "load_profile",
    "parse_signature",
    "run_protocol",
    "save_profile",
    "verify",
]

__version__ = "0.1.0"
