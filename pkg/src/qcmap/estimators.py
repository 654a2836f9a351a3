"""scikit-learn style front end.

The solve-then-evaluate workflow has a natural fit/transform shape: fitting
solves the Beltrami equation for a coefficient (the expensive step), after
which the fitted map transforms arbitrary complex points.  These wrappers
make the solver compose with sklearn tooling (``get_params`` / ``set_params``
/ ``clone``); the operator layer underneath stays functional.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .grid import make_grid
from .regularity import bilipschitz_constants, measured_holder_exponent
from .solve import BeltramiCoefficient, MapEvaluator, neumann_solve

__all__ = ["check_complex_points", "QuasiconformalMapper"]


def check_complex_points(X) -> np.ndarray:
    """Validate an array of planar points; accepts complex or (n, 2) real input."""
    X = np.asarray(X)
    if X.dtype.kind == "c":
        out = X.astype(complex).ravel()
    elif X.ndim == 2 and X.shape[1] == 2:
        out = (X[:, 0] + 1j * X[:, 1]).astype(complex)
    elif X.ndim <= 1:
        out = X.astype(complex).ravel()
    else:
        raise ValueError(f"expected complex points or an (n, 2) real array, got shape {X.shape}")
    if not np.all(np.isfinite(out.view(float))):
        raise ValueError("points contain non-finite values")
    return out


class QuasiconformalMapper(TransformerMixin, BaseEstimator):
    """Quasiconformal map fitted from a Beltrami coefficient.

    Parameters follow the grid-and-tolerance knobs of the solver.  ``fit``
    expects the coefficient (a :class:`BeltramiCoefficient`, or a list of
    ``(domain, value)`` parts); ``transform`` maps points forward and
    ``inverse_transform`` maps them back.
    """

    def __init__(self, grid_n=512, half_width=4.0, center=0.0, tol=1e-8, max_terms=200):
        self.grid_n = grid_n
        self.half_width = half_width
        self.center = center
        self.tol = tol
        self.max_terms = max_terms

    def fit(self, X, y=None):
        mu = X if isinstance(X, BeltramiCoefficient) else BeltramiCoefficient(tuple(X))
        grid = make_grid(self.center, self.half_width, self.grid_n)
        self.solution_ = neumann_solve(mu, grid, tol=self.tol, max_terms=self.max_terms)
        self.evaluator_ = MapEvaluator(self.solution_)
        self.residual_ = self.solution_.residual
        return self

    def _require_fit(self):
        if not hasattr(self, "evaluator_"):
            raise NotFittedError("call fit(coefficient) first")

    def transform(self, X):
        self._require_fit()
        return self.evaluator_.map_values(check_complex_points(X))

    def inverse_transform(self, X):
        self._require_fit()
        return self.evaluator_.invert_values(check_complex_points(X))

    def holder_exponent(self, dom, pairs=5000, seed=0):
        """Measured short-range Hoelder exponent of the fitted map on dom."""
        self._require_fit()
        return measured_holder_exponent(self.evaluator_, dom, pairs=pairs, seed=seed)

    def bilipschitz_report(self, dom, pairs=2000, band=None, seed=0):
        self._require_fit()
        return bilipschitz_constants(self.evaluator_, dom, pairs=pairs, band=band, seed=seed)
