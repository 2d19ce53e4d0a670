"""scikit-learn compatible wrappers.

Each row of ``X`` is one spectrum sampled on a uniform grid over
``interval``; the number of columns fixes the grid at ``fit`` time.  These
compose with :class:`sklearn.pipeline.Pipeline` like any other transformer.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .exceptions import TransmissionRangeError
from .hilbert import HilbertConfig, hilbert_zhou
from .spectral import SampledFunction, linear_interpolate, make_uniform_grid

__all__ = ["ZhouHilbertTransformer", "KramersKronigPhase", "TransmissionInterpolator"]


class ZhouHilbertTransformer(TransformerMixin, BaseEstimator):
    """Row-wise discrete Hilbert transform.

    Parameters
    ----------
    interval : tuple of float
        Frequency range covered by the columns of ``X``.
    j : int
        Kernel accuracy level; samples are spaced ``2**-j``.
    padding : float
        Widen the kernel domain by this much on both sides (edge values held).
    """

    def __init__(self, interval=(0.0, 1.0), j=17, padding=0.0):
        self.interval = interval
        self.j = j
        self.padding = padding

    def fit(self, X, y=None):
        X = check_array(X)
        self.n_features_in_ = X.shape[1]
        self.grid_ = make_uniform_grid(self.interval[0], self.interval[1], X.shape[1])
        self.hilbert_config_ = HilbertConfig.for_grid(self.grid_, self.j, self.padding)
        return self

    def _check(self, X):
        check_is_fitted(self, "grid_")
        X = check_array(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, expected {self.n_features_in_}")
        return X

    def _hilbert_rows(self, X):
        out = np.empty_like(X)
        for i, row in enumerate(X):
            f = SampledFunction(self.grid_, row)
            out[i] = hilbert_zhou(f, self.hilbert_config_, self.grid_).values
        return out

    def transform(self, X):
        return self._hilbert_rows(self._check(X))

    def inverse_transform(self, X):
        # H[H[f]] = -f, up to truncation of the interval
        return -self._hilbert_rows(self._check(X))


class KramersKronigPhase(ZhouHilbertTransformer):
    """Transmission spectra in, phase spectra out (``phi = H[log sqrt(eta)]``).

    ``inverse_transform`` maps phase back to transmission through
    ``eta = exp(-2 H[phi])``; on a finite interval this round trip is only
    accurate away from the ends.
    """

    def transform(self, X):
        X = self._check(X)
        if np.any(X <= 0) or np.any(X > 1):
            raise TransmissionRangeError("transmission values must lie in (0, 1]")
        return self._hilbert_rows(0.5 * np.log(X))

    def inverse_transform(self, X):
        X = self._check(X)
        return np.exp(-2.0 * self._hilbert_rows(X))


class TransmissionInterpolator(RegressorMixin, BaseEstimator):
    """Piecewise-linear function estimate from point measurements.

    ``fit`` takes frequencies (shape ``(n,)`` or ``(n, 1)``) and estimated
    values; ``predict`` evaluates the interpolant.  Queries outside the
    fitted span raise, matching the no-extrapolation rule of the pipeline.
    """

    def __init__(self, n_ref=10_000):
        self.n_ref = n_ref

    def fit(self, X, y):
        X, y = check_X_y(np.reshape(X, (-1, 1)), y)
        order = np.argsort(X[:, 0], kind="stable")
        self.omega_ = X[order, 0]
        self.values_ = y[order]
        self.n_features_in_ = 1
        grid = make_uniform_grid(self.omega_[0], self.omega_[-1], self.n_ref)
        self.estimate_ = linear_interpolate((self.omega_, self.values_), grid)
        return self

    def predict(self, X):
        check_is_fitted(self, "estimate_")
        omega = check_array(np.reshape(X, (-1, 1)))[:, 0]
        if omega.min() < self.omega_[0] or omega.max() > self.omega_[-1]:
            raise ValueError("query frequencies outside the fitted span")
        return np.interp(omega, self.omega_, self.values_)
