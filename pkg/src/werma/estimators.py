"""scikit-learn estimator shells around the fitters and the spectrum op.

These wrap the exact/GD weighted-ERM fitters and the explained-variance
dimension estimate in the standard fit/predict/transform API so they
compose with pipelines, grid search and friends.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin

from ._validation import check_matrix
from .errors import DomainError
from .losses import loss_by_name
from .simulation import GD_GRAD_TOL, GD_MAX_ITER
from .spectrum import DEFAULT_THRESHOLD, effective_dim


class WeightedERMClassifier(BaseEstimator, ClassifierMixin):
    """Linear classifier minimizing class-weighted empirical risk.

    Samples of the positive class (the second entry of ``classes_``)
    carry weight ``rho``, the rest weight 1.  ``loss="square"`` solves the
    normal equations exactly; any other built-in loss runs full-batch
    gradient descent with backtracking.

    Parameters
    ----------
    rho : float, weight on the positive class (use > 1 to favor a minority).
    loss : str, "square" or "logistic".
    tol : float, gradient-norm stopping rule for the descent path.
    max_iter : int, descent budget.
    """

    def __init__(self, rho: float = 1.0, loss: str = "square",
                 tol: float = GD_GRAD_TOL, max_iter: int = GD_MAX_ITER):
        self.rho = rho
        self.loss = loss
        self.tol = tol
        self.max_iter = max_iter

    def fit(self, X, y):
        from .simulation import fit_weighted_general, fit_weighted_square, SampleSet

        X = check_matrix(X, "X")
        y = np.asarray(y).ravel()
        if y.shape[0] != X.shape[0]:
            raise DomainError("X and y have inconsistent lengths")
        self.classes_ = np.unique(y)
        if self.classes_.shape[0] != 2:
            raise DomainError(
                f"binary classifier: expected 2 classes, got {self.classes_.shape[0]}")
        signs = np.where(y == self.classes_[1], 1.0, -1.0)
        # mu is unknown for arbitrary data; any unit direction works for the
        # fit itself, which never touches it.
        mu = np.zeros(X.shape[1])
        mu[0] = 1.0
        data = SampleSet(features=X, labels=signs, mu=mu, seed=0)
        loss_model = loss_by_name(self.loss)
        if self.loss == "square":
            fitted = fit_weighted_square(data, self.rho)
        else:
            fitted = fit_weighted_general(data, self.rho, loss_model,
                                          grad_tol=self.tol, max_iter=self.max_iter)
        self.coef_ = fitted.theta
        self.intercept_ = fitted.bias
        self.objective_ = fitted.objective
        self.n_features_in_ = X.shape[1]
        return self

    def decision_function(self, X):
        X = check_matrix(X, "X")
        if X.shape[1] != self.n_features_in_:
            raise DomainError(
                f"X has {X.shape[1]} features, fit saw {self.n_features_in_}")
        return X @ self.coef_ + self.intercept_

    def predict(self, X):
        scores = self.decision_function(X)
        return np.where(scores > 0, self.classes_[1], self.classes_[0])

    def alignment_summary(self, mu) -> tuple[float, float, float]:
        """(alpha, gamma, bias) of the fit relative to a known mean direction."""
        mu = np.asarray(mu, dtype=float)
        s = float(np.linalg.norm(mu))
        if s <= 0:
            raise DomainError("mu must be nonzero")
        alpha = float(np.linalg.norm(self.coef_))
        gamma = float(mu @ self.coef_ / s)
        return alpha, gamma, float(self.intercept_)


class EffectiveDimension(BaseEstimator, TransformerMixin):
    """Explained-variance dimension estimate with a PCA-style transform.

    fit computes the centered covariance spectrum and the smallest k
    capturing ``threshold`` of the variance (attribute ``effective_dim_``);
    transform projects onto those k leading directions.
    """

    def __init__(self, threshold: float = DEFAULT_THRESHOLD):
        self.threshold = threshold

    def fit(self, X, y=None):
        X = check_matrix(X, "X")
        report = effective_dim(X, self.threshold)
        self.report_ = report
        self.effective_dim_ = report.effective_dim
        self.eigenvalues_ = np.asarray(report.eigenvalues)
        self.cumulative_variance_ratio_ = np.asarray(report.cumulative_variance_fraction)
        self.mean_ = X.mean(axis=0)
        centered = X - self.mean_
        _, _, vt = np.linalg.svd(centered, full_matrices=False)
        self.components_ = vt[: self.effective_dim_]
        return self

    def transform(self, X):
        X = check_matrix(X, "X")
        if X.shape[1] != self.mean_.shape[0]:
            raise DomainError(
                f"X has {X.shape[1]} features, fit saw {self.mean_.shape[0]}")
        return (X - self.mean_) @ self.components_.T
