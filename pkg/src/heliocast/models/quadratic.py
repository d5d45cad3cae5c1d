"""Degree-2 polynomial regression (module temperature from ambient)."""

from __future__ import annotations

import numpy as np


class QuadraticRegression:
    """Least-squares quadratic y = c0 + c1*x + c2*x^2."""

    def __init__(self):
        self.coefficients_: np.ndarray | None = None

    def fit(self, x, y) -> "QuadraticRegression":
        xs = np.asarray(x, dtype=float).reshape(-1)
        ys = np.asarray(y, dtype=float).reshape(-1)
        if xs.shape[0] != ys.shape[0]:
            raise ValueError("x and y have different lengths")
        if np.unique(xs).size < 3:
            raise ValueError(
                f"need at least 3 distinct x values for a quadratic fit "
                f"(got {np.unique(xs).size})"
            )
        design = np.column_stack([np.ones_like(xs), xs, xs * xs])
        self.coefficients_, *_ = np.linalg.lstsq(design, ys, rcond=None)
        return self

    def predict(self, x) -> np.ndarray:
        if self.coefficients_ is None:
            raise ValueError("model has not been fitted")
        xs = np.asarray(x, dtype=float)
        c0, c1, c2 = self.coefficients_
        return c0 + c1 * xs + c2 * xs * xs

    def to_dict(self) -> dict:
        return {"coefficients": self.coefficients_.tolist()}

    @classmethod
    def from_dict(cls, payload: dict) -> "QuadraticRegression":
        model = cls()
        model.coefficients_ = np.asarray(payload["coefficients"], dtype=float)
        return model
