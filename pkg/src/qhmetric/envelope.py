"""Monotone growth tables and estimators that fit them to sampled metric pairs."""

from __future__ import annotations

import numpy as np
from scipy.optimize import linprog
from sklearn.base import BaseEstimator
from sklearn.isotonic import IsotonicRegression
from sklearn.utils.validation import check_is_fitted

from .errors import PreconditionError


class GrowthTable:
    """Nondecreasing piecewise-linear function given by knots ``(xs, ys)``.

    Evaluation extrapolates linearly with the slope of the nearest segment
    (clamped to be nonnegative).  With ``growth=True`` the table must also
    satisfy ``phi(t) >= t`` at every knot.
    """

    def __init__(self, xs, ys, growth=True):
        xs = np.asarray(xs, dtype=float).ravel()
        ys = np.asarray(ys, dtype=float).ravel()
        if len(xs) != len(ys) or len(xs) < 2:
            raise PreconditionError("a growth table needs at least two knots and matching lengths")
        if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ys))):
            raise PreconditionError("growth table knots must be finite")
        if np.any(np.diff(xs) <= 0):
            raise PreconditionError("growth table abscissae must be strictly increasing")
        if np.any(np.diff(ys) < 0):
            raise PreconditionError("growth table values must be nondecreasing")
        if growth and np.any(ys < xs - 1e-12 * np.maximum(1.0, np.abs(xs))):
            raise PreconditionError("growth table must satisfy phi(t) >= t")
        self.xs, self.ys = xs, ys
        self.xs.setflags(write=False)
        self.ys.setflags(write=False)

    @classmethod
    def linear(cls, slope, upto=100.0, growth=True):
        return cls([0.0, upto], [0.0, slope * upto], growth=growth)

    @classmethod
    def from_function(cls, fn, xs, growth=True):
        xs = np.asarray(xs, dtype=float)
        return cls(xs, [fn(x) for x in xs], growth=growth)

    def _slopes(self):
        s = np.diff(self.ys) / np.diff(self.xs)
        return max(s[0], 0.0), max(s[-1], 0.0)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        lo, hi = self._slopes()
        out = np.interp(t, self.xs, self.ys)
        out = np.where(t > self.xs[-1], self.ys[-1] + hi * (t - self.xs[-1]), out)
        out = np.where(t < self.xs[0], self.ys[0] + lo * (t - self.xs[0]), out)
        return out if out.ndim else float(out)

    def inverse(self, v):
        """Smallest ``t`` with ``phi(t) >= v`` on the extrapolated table."""
        v = np.asarray(v, dtype=float)
        lo, hi = self._slopes()
        # left end of each flat run, so ties resolve to the smallest preimage
        keep = np.concatenate([[True], np.diff(self.ys) > 0])
        xs, ys = self.xs[keep], self.ys[keep]
        out = np.interp(v, ys, xs) if len(xs) > 1 else np.full_like(v, xs[0])
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(v > self.ys[-1], self.xs[-1] + (v - self.ys[-1]) / hi if hi > 0 else np.inf, out)
            out = np.where(v < self.ys[0], self.xs[0] + (v - self.ys[0]) / lo if lo > 0 else -np.inf, out)
        return out if out.ndim else float(out)

    def to_dict(self):
        return {"xs": self.xs.tolist(), "ys": self.ys.tolist()}

    def __repr__(self):
        return f"GrowthTable({len(self.xs)} knots on [{self.xs[0]:.4g}, {self.xs[-1]:.4g}])"


def pointwise_max(f: GrowthTable, g: GrowthTable, growth=True) -> GrowthTable:
    """Exact piecewise-linear maximum of two tables, crossings included as knots."""
    xs = np.union1d(f.xs, g.xs)
    knots = [xs[0]]
    for a, b in zip(xs[:-1], xs[1:]):
        da, db = f(a) - g(a), f(b) - g(b)
        if da * db < 0:
            knots.append(a + (b - a) * da / (da - db))
        knots.append(b)
    knots = np.asarray(knots)
    return GrowthTable(knots, np.maximum(f(knots), g(knots)), growth=growth)


class MonotoneEnvelope(BaseEstimator):
    """Nondecreasing upper envelope of ``(source, target)`` samples.

    Fits an isotonic regression and shifts it up by the largest residual so
    that every sample lies on or below the curve.

    Parameters
    ----------
    growth : bool
        Also enforce ``phi(t) >= t`` (a growth function).
    """

    def __init__(self, growth=True):
        self.growth = growth

    def fit(self, X, y):
        X = np.asarray(X, dtype=float).ravel()
        y = np.asarray(y, dtype=float).ravel()
        if len(X) != len(y) or len(X) == 0:
            raise PreconditionError("envelope needs matching, non-empty samples")
        iso = IsotonicRegression(increasing=True, out_of_bounds="clip").fit(X, y)
        xs = np.unique(X)
        fitted = iso.predict(xs)
        self.shift_ = float(max(0.0, np.max(y - iso.predict(X))))
        ys = fitted + self.shift_
        if self.growth:
            ys = np.maximum.accumulate(np.maximum(ys, xs))
        if len(xs) == 1:
            xs = np.array([xs[0], xs[0] + 1.0])
            ys = np.array([ys[0], ys[0] + (1.0 if self.growth else 0.0)])
        self.table_ = GrowthTable(xs, ys, growth=self.growth)
        self.n_samples_ = len(X)
        return self

    def predict(self, X):
        check_is_fitted(self, "table_")
        return self.table_(np.asarray(X, dtype=float))

    def dominates(self, X, y, rtol=0.0):
        return bool(np.all(np.asarray(y) <= self.predict(X) * (1.0 + rtol) + 1e-12))


class AffineDominator(BaseEstimator):
    """Smallest-on-average ``c t + d`` with ``c, d >= 0`` lying above every sample.

    The line minimizes the mean gap to the samples, a linear program.
    """

    def fit(self, X, y):
        X = np.asarray(X, dtype=float).ravel()
        y = np.asarray(y, dtype=float).ravel()
        if len(X) != len(y) or len(X) == 0:
            raise PreconditionError("affine fit needs matching, non-empty samples")
        # variables (c, d); constraint c x_i + d >= y_i
        res = linprog(c=[X.mean(), 1.0], A_ub=np.stack([-X, -np.ones_like(X)], axis=1), b_ub=-y,
                      bounds=[(0, None), (0, None)], method="highs")
        if not res.success:
            raise PreconditionError(f"affine fit failed: {res.message}")
        self.coef_, self.intercept_ = (float(v) for v in res.x)
        # absorb solver round-off so the line truly dominates
        self.intercept_ += float(max(0.0, np.max(y - self.coef_ * X - self.intercept_)))
        return self

    def predict(self, X):
        check_is_fitted(self, "coef_")
        return self.coef_ * np.asarray(X, dtype=float) + self.intercept_
