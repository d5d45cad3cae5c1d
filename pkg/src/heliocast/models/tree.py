"""Regression tree grown by greedy variance-minimizing splits."""

from __future__ import annotations

import numpy as np

_LEAF = -1


class RegressionTree:
    """Binary regression tree; each split minimizes the children's weighted
    target variance and each leaf predicts the mean of its training targets.

    Determinism rules: equal-cost splits resolve to the lowest feature index
    then the lowest threshold, and a feature value equal to a threshold is
    routed to the left child.
    """

    def __init__(self, max_depth: int = 8, min_leaf: int = 5):
        if max_depth < 1:
            raise ValueError("max_depth must be at least 1")
        if min_leaf < 1:
            raise ValueError("min_leaf must be at least 1")
        self.max_depth = max_depth
        self.min_leaf = min_leaf
        # Flat node arrays; children are node indices, _LEAF marks a leaf.
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.value: list[float] = []
        self.n_features_: int | None = None

    def fit(self, features, targets) -> "RegressionTree":
        x = np.asarray(features, dtype=float)
        y = np.asarray(targets, dtype=float)
        if x.ndim != 2:
            raise ValueError("features must be a 2-D matrix")
        if x.shape[0] != y.shape[0]:
            raise ValueError("features and targets have different lengths")
        if x.shape[0] < 2 * self.min_leaf:
            raise ValueError(
                f"need at least {2 * self.min_leaf} samples to fit (got {x.shape[0]})"
            )
        self.n_features_ = x.shape[1]
        self.feature, self.threshold = [], []
        self.left, self.right, self.value = [], [], []
        self._grow(x, y, depth=0)
        return self

    def _new_node(self) -> int:
        self.feature.append(_LEAF)
        self.threshold.append(0.0)
        self.left.append(_LEAF)
        self.right.append(_LEAF)
        self.value.append(0.0)
        return len(self.feature) - 1

    def _grow(self, x: np.ndarray, y: np.ndarray, depth: int) -> int:
        node = self._new_node()
        self.value[node] = float(y.mean())
        n = y.shape[0]
        parent_sse = float(((y - y.mean()) ** 2).sum())
        if depth >= self.max_depth or n < 2 * self.min_leaf or parent_sse == 0.0:
            return node
        split = self._best_split(x, y)
        if split is None or split[2] >= parent_sse:
            return node
        feat, thresh, _ = split
        go_left = x[:, feat] <= thresh
        self.feature[node] = feat
        self.threshold[node] = thresh
        self.left[node] = self._grow(x[go_left], y[go_left], depth + 1)
        self.right[node] = self._grow(x[~go_left], y[~go_left], depth + 1)
        return node

    def _best_split(self, x: np.ndarray, y: np.ndarray):
        """Lowest-SSE (feature, threshold) over all candidate splits, or None.

        Candidate thresholds are midpoints between consecutive distinct
        sorted feature values, restricted so both children keep min_leaf
        samples. SSE left/right comes from cumulative sums in sorted order.
        """
        n = y.shape[0]
        best = None
        for feat in range(x.shape[1]):
            order = np.argsort(x[:, feat], kind="stable")
            xs = x[order, feat]
            ys = y[order]
            csum = np.cumsum(ys)
            csq = np.cumsum(ys * ys)
            total_sum = csum[-1]
            total_sq = csq[-1]
            # Split after position k puts k+1 samples on the left.
            ks = np.arange(self.min_leaf - 1, n - self.min_leaf)
            if ks.size == 0:
                continue
            distinct = xs[ks] < xs[ks + 1]
            ks = ks[distinct]
            if ks.size == 0:
                continue
            n_left = ks + 1.0
            n_right = n - n_left
            sse_left = csq[ks] - csum[ks] ** 2 / n_left
            sse_right = (total_sq - csq[ks]) - (total_sum - csum[ks]) ** 2 / n_right
            cost = sse_left + sse_right
            k_best = int(np.argmin(cost))
            if best is None or cost[k_best] < best[2]:
                thresh = 0.5 * (xs[ks[k_best]] + xs[ks[k_best] + 1])
                best = (feat, float(thresh), float(cost[k_best]))
        return best

    def predict(self, features) -> np.ndarray:
        x = np.atleast_2d(np.asarray(features, dtype=float))
        if self.n_features_ is None:
            raise ValueError("tree has not been fitted")
        if x.shape[1] != self.n_features_:
            raise ValueError(f"expected {self.n_features_} features, got {x.shape[1]}")
        out = np.empty(x.shape[0])
        for i, row in enumerate(x):
            node = 0
            while self.feature[node] != _LEAF:
                if row[self.feature[node]] <= self.threshold[node]:
                    node = self.left[node]
                else:
                    node = self.right[node]
            out[i] = self.value[node]
        return out

    @property
    def node_count(self) -> int:
        return len(self.feature)

    def to_dict(self) -> dict:
        return {
            "max_depth": self.max_depth,
            "min_leaf": self.min_leaf,
            "n_features": self.n_features_,
            "feature": list(self.feature),
            "threshold": list(self.threshold),
            "left": list(self.left),
            "right": list(self.right),
            "value": list(self.value),
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "RegressionTree":
        tree = cls(max_depth=payload["max_depth"], min_leaf=payload["min_leaf"])
        tree.n_features_ = payload["n_features"]
        tree.feature = list(payload["feature"])
        tree.threshold = list(payload["threshold"])
        tree.left = list(payload["left"])
        tree.right = list(payload["right"])
        tree.value = list(payload["value"])
        return tree
