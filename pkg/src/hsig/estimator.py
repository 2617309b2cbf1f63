"""Scikit-learn style wrapper around enrollment and verification.

fit() enrolls a user from a list of reference RawSignature objects;
decision_function() returns similarity scores and predict() boolean
genuine/forged decisions, so the verifier composes with sklearn tooling
(clone, get_params/set_params, pipelines over custom objects).
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .classifier import verify
from .enrollment import EnrollmentParams, enroll


class SignatureVerifier(BaseEstimator):
    """One-class verifier for dynamic handwritten signatures.

    Parameters
    ----------
    P : number of vertical time sections (2 matches the best reported setting)
    delta : tolerance multiplier, >= 1
    mu_min : membership value at the tolerance radius, in (0, 1)
    cth : acceptance threshold on the similarity score
    mode : "full" uses pressure in test-time alignment, "shape_only" drops it
    """

    def __init__(self, P: int = 2, delta: float = 1.0, mu_min: float = 0.01,
                 cth: float = 0.5, mode: str = "full"):
        self.P = P
        self.delta = delta
        self.mu_min = mu_min
        self.cth = cth
        self.mode = mode

    def fit(self, X, y=None):
        """Enroll from X, a list of reference RawSignature objects."""
        params = EnrollmentParams(delta=self.delta, mu_min=self.mu_min,
                                  cth=self.cth, P=self.P)
        self.profile_ = enroll(list(X), params)
        return self

    def decision_function(self, X) -> np.ndarray:
        """Similarity score in [0, 1] for each test signature."""
        check_is_fitted(self, "profile_")
        return np.array([verify(sig, self.profile_, mode=self.mode).similarity
                         for sig in X])

    def predict(self, X) -> np.ndarray:
        """True where the signature is accepted as genuine."""
        return self.decision_function(X) > self.cth

    def verify_one(self, sig):
        """Full VerificationResult (scores plus per-cell distances) for one signature."""
        check_is_fitted(self, "profile_")
        return verify(sig, self.profile_, mode=self.mode)
