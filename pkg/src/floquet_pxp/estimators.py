"""scikit-learn style front ends.

:class:`FloquetSpectrum` fits the Floquet decomposition of one drive setting
and transforms initial states into their overlap weights.
:class:`RevivalLawRegressor` fits ``n_rev(h)`` and predicts it for new
amplitudes, so it composes with ``sklearn`` pipelines and model selection.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .basis import enumerate_basis
from .floquet import DEFAULT_ETA, decompose, dominant_spacing, overlaps, revival_index
from .operators import DriveParams
from .propagation import DEFAULT_STEPS, one_period_propagator, orbit_amplitudes
from .states import StateVector, parse_state
from .sweep import MODELS, bessel_j0, fit_nrev, min_revival_index


class FloquetSpectrum(TransformerMixin, BaseEstimator):
    """Floquet spectrum of the driven PXP chain at fixed ``(h, omega_d)``.

    Parameters
    ----------
    L : int
        Number of sites.
    h, omega_d : float
        Drive amplitude and frequency in units of the Rabi frequency.
    steps : int
        Split-step substeps per period.
    eta : float
        Dominant-state threshold used by :meth:`revival_index`.
    """

    def __init__(self, L=10, h=0.0, omega_d=5.0, steps=DEFAULT_STEPS, eta=DEFAULT_ETA):
        self.L = L
        self.h = h
        self.omega_d = omega_d
        self.steps = steps
        self.eta = eta

    def fit(self, X=None, y=None):
        self.basis_ = enumerate_basis(self.L)
        self.propagator_ = one_period_propagator(
            self.basis_, DriveParams(self.h, self.omega_d), self.steps
        )
        self.decomposition_ = decompose(self.propagator_)
        self.quasi_energies_ = self.decomposition_.quasi_energies
        self.bandwidth_ = self.decomposition_.bandwidth
        return self

    def _as_amplitudes(self, X) -> np.ndarray:
        if isinstance(X, str):
            return parse_state(X, self.basis_).amplitudes[None, :]
        if isinstance(X, StateVector):
            return X.amplitudes[None, :]
        # check_array rejects complex input
        X = np.atleast_2d(np.asarray(X, dtype=complex))
        if X.ndim != 2 or not np.all(np.isfinite(X)):
            raise ValueError("amplitudes must be a finite 1d or 2d array")
        if X.shape[1] != self.basis_.size:
            raise ValueError(f"expected {self.basis_.size} amplitudes per state, got {X.shape[1]}")
        return X

    def transform(self, X):
        """Overlap weights ``|c_m|^2``, one row per state, columns sorted by quasi-energy."""
        check_is_fitted(self, "decomposition_")
        A = self._as_amplitudes(X)
        return np.abs(A.conj() @ self.decomposition_.eigenvectors) ** 2

    def overlaps(self, state):
        check_is_fitted(self, "decomposition_")
        if isinstance(state, str):
            state = parse_state(state, self.basis_)
        return overlaps(self.decomposition_, state)

    def revival_index(self, state="neel") -> float:
        profile = self.overlaps(state)
        return revival_index(dominant_spacing(profile, self.eta), self.omega_d)

    def fidelity(self, state, n_max: int) -> np.ndarray:
        """``F(nT)`` for ``n = 0..n_max`` by repeated application of the propagator."""
        check_is_fitted(self, "propagator_")
        psi0 = self._as_amplitudes(state)[0]
        orbit = orbit_amplitudes(self.propagator_.U, psi0, n_max)
        return np.abs(orbit @ psi0.conj()) ** 2


class RevivalLawRegressor(RegressorMixin, BaseEstimator):
    """Least-squares fit of ``n_rev(h) = omega_d / (gamma J0(h/omega_d)) + alpha``.

    ``X`` holds drive amplitudes ``h`` (one column), ``y`` the revival indices.
    """

    def __init__(self, omega_d=5.0, model="with_offset", window=None):
        self.omega_d = omega_d
        self.model = model
        self.window = window

    def fit(self, X, y):
        if self.model not in MODELS:
            raise ValueError(f"model must be one of {MODELS}")
        X = check_array(X, ensure_2d=False)
        h = X.ravel() if X.ndim == 1 or X.shape[1] == 1 else None
        if h is None:
            raise ValueError("X must contain a single feature (the drive amplitude)")
        y = check_array(y, ensure_2d=False, ensure_all_finite=False).ravel()
        self.result_ = fit_nrev(np.column_stack([h, y]), self.omega_d, self.model, self.window)
        self.gamma_ = self.result_.gamma
        self.alpha_ = self.result_.alpha
        self.gamma_err_ = self.result_.gamma_err
        self.alpha_err_ = self.result_.alpha_err
        self.n_features_in_ = 1
        return self

    def predict(self, X):
        check_is_fitted(self, "result_")
        X = check_array(X, ensure_2d=False)
        h = X.ravel()
        return self.omega_d / (self.gamma_ * bessel_j0(h / self.omega_d)) + self.alpha_

    def min_revival_index(self) -> float:
        check_is_fitted(self, "result_")
        return min_revival_index(self.result_, self.omega_d)
