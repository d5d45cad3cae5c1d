"""Epsilon-insensitive support vector regression solved by pairwise SMO.

The dual is written over 2n stacked variables t = [u; v] (u pushes the fit
up, v pushes it down), with kernel matrix K:

    minimize   0.5 * t'Qt + p't,   Q = [[K, -K], [-K, K]],
    subject to s't = 0,  0 <= t <= C,   s = [+1...; -1...],
    p = [eps - y; eps + y]

The fitted function is f(x) = sum_i (u_i - v_i) K(x_i, x) + b. Working pairs
are chosen by the maximal-violating-pair rule and the loop stops when the
KKT violation gap falls below the tolerance.
"""

from __future__ import annotations

import numpy as np

from heliocast.errors import ConvergenceError


def rbf_kernel(a: np.ndarray, b: np.ndarray, gamma: float) -> np.ndarray:
    """Gaussian kernel matrix between row sets a (m,d) and b (k,d)."""
    sq = (
        np.sum(a * a, axis=1)[:, None]
        + np.sum(b * b, axis=1)[None, :]
        - 2.0 * (a @ b.T)
    )
    return np.exp(-gamma * np.maximum(sq, 0.0))


class SupportVectorRegressor:
    def __init__(
        self,
        c: float = 1000.0,
        epsilon: float = 0.1,
        gamma: float | None = None,
        tol: float = 1e-3,
        max_iter: int = 200_000,
    ):
        if c <= 0:
            raise ValueError("c must be positive")
        if epsilon < 0:
            raise ValueError("epsilon must be non-negative")
        self.c = c
        self.epsilon = epsilon
        self.gamma = gamma
        self.tol = tol
        self.max_iter = max_iter
        self.support_vectors_: np.ndarray | None = None
        self.coefficients_: np.ndarray | None = None
        self.bias_: float = 0.0
        self.gamma_: float | None = None
        self.dual_objective_: float = 0.0
        self.iterations_: int = 0
        self.n_features_: int | None = None

    def fit(self, features, targets) -> "SupportVectorRegressor":
        x = np.atleast_2d(np.asarray(features, dtype=float))
        y = np.asarray(targets, dtype=float).reshape(-1)
        n = x.shape[0]
        if n < 2:
            raise ValueError("need at least 2 samples to fit")
        if y.shape[0] != n:
            raise ValueError("features and targets have different lengths")
        self.n_features_ = x.shape[1]
        if self.gamma is not None:
            gamma = self.gamma
        else:
            variance = x.var()
            gamma = 1.0 / (x.shape[1] * variance) if variance > 0 else 1.0
        self.gamma_ = float(gamma)

        kernel = rbf_kernel(x, x, gamma)
        s = np.concatenate([np.ones(n), -np.ones(n)])
        p = np.concatenate([self.epsilon - y, self.epsilon + y])
        t = np.zeros(2 * n)
        grad = p.copy()
        c = self.c

        diag = np.diag(kernel)
        for iteration in range(self.max_iter):
            # First-order choice of i; second-order (gain-maximizing) choice
            # of j, which copes with near-duplicate rows of zero curvature.
            can_up = np.where(s > 0, t < c, t > 0)
            can_dn = np.where(s > 0, t > 0, t < c)
            score = -s * grad
            up_score = np.where(can_up, score, -np.inf)
            dn_score = np.where(can_dn, score, np.inf)
            i = int(np.argmax(up_score))
            m_hi = up_score[i]
            m_lo = float(np.min(dn_score))
            gap = m_hi - m_lo
            if gap <= self.tol:
                self.iterations_ = iteration
                break

            ii = i % n
            tiled_i = np.concatenate([kernel[:, ii], kernel[:, ii]])
            curvature = np.maximum(
                diag[ii] + np.concatenate([diag, diag]) - 2.0 * tiled_i, 1e-12
            )
            diff = up_score[i] - dn_score
            gain = np.where(can_dn & (diff > 0), diff * diff / curvature, -np.inf)
            j = int(np.argmax(gain))

            jj = j % n
            step = diff[j] / curvature[j]
            # Box limits along the direction (t_i moves by +s_i*step, t_j by -s_j*step).
            step = min(step, c - t[i] if s[i] > 0 else t[i])
            step = min(step, t[j] if s[j] > 0 else c - t[j])
            t[i] += s[i] * step
            t[j] -= s[j] * step
            tiled_j = np.concatenate([kernel[:, jj], kernel[:, jj]])
            # grad change = Q @ dt with dt = step * (s_i e_i - s_j e_j).
            grad += step * s * (tiled_i - tiled_j)
        else:
            raise ConvergenceError(
                f"SMO did not converge in {self.max_iter} iterations "
                f"(KKT violation gap {gap:.3e}, tolerance {self.tol:.3e})"
            )

        beta = t[:n] - t[n:]
        free = (t > 1e-12 * c) & (t < c * (1 - 1e-12))
        if free.any():
            self.bias_ = float(np.mean(-s[free] * grad[free]))
        else:
            self.bias_ = float((m_hi + m_lo) / 2.0)
        keep = np.abs(beta) > 0
        self.support_vectors_ = x[keep]
        self.coefficients_ = beta[keep]
        self.dual_objective_ = float(
            0.5 * beta @ kernel @ beta + self.epsilon * np.sum(t) - y @ beta
        )
        return self

    def predict(self, features) -> np.ndarray:
        if self.support_vectors_ is None:
            raise ValueError("model has not been fitted")
        x = np.atleast_2d(np.asarray(features, dtype=float))
        if x.shape[1] != self.n_features_:
            raise ValueError(f"expected {self.n_features_} features, got {x.shape[1]}")
        if self.support_vectors_.shape[0] == 0:
            return np.full(x.shape[0], self.bias_)
        k = rbf_kernel(self.support_vectors_, x, self.gamma_)
        return self.coefficients_ @ k + self.bias_

    def to_dict(self) -> dict:
        return {
            "c": self.c,
            "epsilon": self.epsilon,
            "gamma": self.gamma_,
            "bias": self.bias_,
            "n_features": self.n_features_,
            "support_vectors": self.support_vectors_.tolist(),
            "coefficients": self.coefficients_.tolist(),
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "SupportVectorRegressor":
        model = cls(c=payload["c"], epsilon=payload["epsilon"], gamma=payload["gamma"])
        model.gamma_ = payload["gamma"]
        model.bias_ = payload["bias"]
        model.n_features_ = payload["n_features"]
        model.support_vectors_ = np.asarray(payload["support_vectors"], dtype=float)
        model.coefficients_ = np.asarray(payload["coefficients"], dtype=float)
        return model
