"""Feedforward neural network trained by backpropagation.

Seven layers by default (input, five sigmoid hidden layers, output), with
mini-batch adaptive gradient descent (Adam update rule) on mean squared
error. Training stops early once two consecutive epochs fail to improve the
training loss by at least the relative tolerance, and the weights kept are
the ones with the lowest validation loss seen, not the final epoch's.
"""

from __future__ import annotations

import numpy as np

from heliocast.errors import ConvergenceError

DEFAULT_WIDTHS = (3, 32, 32, 16, 16, 8, 1)


def sigmoid(x: np.ndarray) -> np.ndarray:
    # exp overflow on saturated units resolves to the correct 0/1 limits
    with np.errstate(over="ignore"):
        return 1.0 / (1.0 + np.exp(-x))


class NeuralNet:
    def __init__(
        self,
        widths=DEFAULT_WIDTHS,
        learning_rate: float = 0.01,
        batch_size: int = 32,
        max_epochs: int = 500,
        patience: int = 2,
        min_rel_improvement: float = 0.01,
        output_activation: str = "linear",
        seed: int = 0,
    ):
        if len(widths) < 2:
            raise ValueError("need at least an input and an output layer")
        if output_activation not in ("linear", "sigmoid"):
            raise ValueError(f"unknown output activation '{output_activation}'")
        self.widths = tuple(int(w) for w in widths)
        self.learning_rate = learning_rate
        self.batch_size = batch_size
        self.max_epochs = max_epochs
        self.patience = patience
        self.min_rel_improvement = min_rel_improvement
        self.output_activation = output_activation
        self.seed = seed
        rng = np.random.default_rng(seed)
        self.weights: list[np.ndarray] = []
        self.biases: list[np.ndarray] = []
        for fan_in, fan_out in zip(self.widths[:-1], self.widths[1:]):
            bound = np.sqrt(6.0 / (fan_in + fan_out))
            self.weights.append(rng.uniform(-bound, bound, size=(fan_in, fan_out)))
            self.biases.append(np.zeros(fan_out))
        self.epochs_run_ = 0
        self.best_val_loss_ = np.inf

    def _check_features(self, features) -> np.ndarray:
        x = np.atleast_2d(np.asarray(features, dtype=float))
        if x.shape[1] != self.widths[0]:
            raise ValueError(f"expected {self.widths[0]} features, got {x.shape[1]}")
        return x

    def _forward(self, x: np.ndarray):
        """Activations layer by layer; index 0 is the input itself."""
        activations = [x]
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            z = activations[-1] @ w + b
            last = i == len(self.weights) - 1
            if last and self.output_activation == "linear":
                activations.append(z)
            else:
                activations.append(sigmoid(z))
        return activations

    def predict(self, features) -> np.ndarray:
        x = self._check_features(features)
        return self._forward(x)[-1][:, 0]

    def loss(self, features, targets) -> float:
        pred = self.predict(features)
        y = np.asarray(targets, dtype=float).reshape(-1)
        return float(np.mean((pred - y) ** 2))

    def gradient(self, features, targets):
        """Backpropagated MSE gradients, same shapes as weights/biases."""
        x = self._check_features(features)
        y = np.asarray(targets, dtype=float).reshape(-1, 1)
        activations = self._forward(x)
        n = x.shape[0]
        delta = 2.0 * (activations[-1] - y) / n
        if self.output_activation == "sigmoid":
            delta = delta * activations[-1] * (1.0 - activations[-1])
        grads_w = [np.empty(0)] * len(self.weights)
        grads_b = [np.empty(0)] * len(self.biases)
        for layer in range(len(self.weights) - 1, -1, -1):
            grads_w[layer] = activations[layer].T @ delta
            grads_b[layer] = delta.sum(axis=0)
            if layer > 0:
                a = activations[layer]
                delta = (delta @ self.weights[layer].T) * a * (1.0 - a)
        return grads_w, grads_b

    def fit(self, features, targets, val_features=None, val_targets=None) -> "NeuralNet":
        """Mini-batch gradient descent with early stopping.

        When no validation set is given, the last tenth of the samples is
        held out for the best-weights snapshot.
        """
        x = self._check_features(features)
        y = np.asarray(targets, dtype=float).reshape(-1)
        if x.shape[0] != y.shape[0]:
            raise ValueError("features and targets have different lengths")
        if val_features is None:
            cut = max(1, int(round(x.shape[0] * 0.9)))
            cut = min(cut, x.shape[0] - 1) if x.shape[0] > 1 else cut
            x, x_val = x[:cut], x[cut:]
            y, y_val = y[:cut], y[cut:]
            if x_val.shape[0] == 0:
                x_val, y_val = x, y
        else:
            x_val = self._check_features(val_features)
            y_val = np.asarray(val_targets, dtype=float).reshape(-1)

        rng = np.random.default_rng(self.seed + 1)
        moment_w = [np.zeros_like(w) for w in self.weights]
        scale_w = [np.zeros_like(w) for w in self.weights]
        moment_b = [np.zeros_like(b) for b in self.biases]
        scale_b = [np.zeros_like(b) for b in self.biases]
        beta1, beta2, eps = 0.9, 0.999, 1e-8
        step = 0
        best_train = np.inf
        best_weights = [w.copy() for w in self.weights]
        best_biases = [b.copy() for b in self.biases]
        self.best_val_loss_ = self.loss(x_val, y_val)
        stall = 0
        n = x.shape[0]
        for epoch in range(self.max_epochs):
            order = rng.permutation(n)
            for start in range(0, n, self.batch_size):
                batch = order[start : start + self.batch_size]
                grads_w, grads_b = self.gradient(x[batch], y[batch])
                step += 1
                bias_fix1 = 1.0 - beta1**step
                bias_fix2 = 1.0 - beta2**step
                for layer in range(len(self.weights)):
                    moment_w[layer] = beta1 * moment_w[layer] + (1 - beta1) * grads_w[layer]
                    scale_w[layer] = beta2 * scale_w[layer] + (1 - beta2) * grads_w[layer] ** 2
                    moment_b[layer] = beta1 * moment_b[layer] + (1 - beta1) * grads_b[layer]
                    scale_b[layer] = beta2 * scale_b[layer] + (1 - beta2) * grads_b[layer] ** 2
                    self.weights[layer] -= (
                        self.learning_rate
                        * (moment_w[layer] / bias_fix1)
                        / (np.sqrt(scale_w[layer] / bias_fix2) + eps)
                    )
                    self.biases[layer] -= (
                        self.learning_rate
                        * (moment_b[layer] / bias_fix1)
                        / (np.sqrt(scale_b[layer] / bias_fix2) + eps)
                    )
            train_loss = self.loss(x, y)
            if not np.isfinite(train_loss):
                raise ConvergenceError(f"training diverged at epoch {epoch + 1}")
            val_loss = self.loss(x_val, y_val)
            self.epochs_run_ = epoch + 1
            if val_loss < self.best_val_loss_:
                self.best_val_loss_ = val_loss
                best_weights = [w.copy() for w in self.weights]
                best_biases = [b.copy() for b in self.biases]
            if train_loss < best_train * (1.0 - self.min_rel_improvement):
                best_train = train_loss
                stall = 0
            else:
                best_train = min(best_train, train_loss)
                stall += 1
                if stall >= self.patience:
                    break
        self.weights = best_weights
        self.biases = best_biases
        return self

    def to_dict(self) -> dict:
        return {
            "widths": list(self.widths),
            "output_activation": self.output_activation,
            "weights": [w.tolist() for w in self.weights],
            "biases": [b.tolist() for b in self.biases],
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "NeuralNet":
        net = cls(widths=payload["widths"], output_activation=payload["output_activation"])
        net.weights = [np.asarray(w, dtype=float) for w in payload["weights"]]
        net.biases = [np.asarray(b, dtype=float) for b in payload["biases"]]
        return net
