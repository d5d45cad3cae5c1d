"""First-order Sobol sensitivity indices by Monte-Carlo estimation.

Two independent N-by-k sample matrices A and B are drawn uniformly over the
input ranges. For input i, the matrix A_B^i takes column i from B and every
other column from A; the partial variance is estimated as

    V_i = (1/N) * sum_j f(B)_j * (f(A_B^i)_j - f(A)_j)

and normalized by the empirical variance of f over the pooled A and B
evaluations. Evaluation order is fixed, so results are bit-reproducible for
a given seed and sample count.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MIN_SAMPLES = 1000


@dataclass(frozen=True)
class SobolReport:
    first_order: dict[str, float]
    n_samples: int
    seed: int
    output_variance: float

    def as_dict(self) -> dict:
        return {
            "first_order": dict(self.first_order),
            "n_samples": self.n_samples,
            "seed": self.seed,
            "output_variance": self.output_variance,
        }


def sobol_first_order(
    model,
    ranges,
    n_samples: int,
    seed: int = 0,
    names: list[str] | None = None,
) -> SobolReport:
    """First-order index per input of ``model`` (a vectorized f(matrix)->vector)."""
    lo_hi = [(float(lo), float(hi)) for lo, hi in ranges]
    k = len(lo_hi)
    if k == 0:
        raise ValueError("need at least one input range")
    for lo, hi in lo_hi:
        if not (np.isfinite(lo) and np.isfinite(hi)) or hi <= lo:
            raise ValueError(f"invalid input range ({lo}, {hi})")
    if n_samples < MIN_SAMPLES:
        raise ValueError(f"n_samples must be at least {MIN_SAMPLES}")
    if names is None:
        names = [f"x{i + 1}" for i in range(k)]
    elif len(names) != k:
        raise ValueError("names and ranges have different lengths")

    rng = np.random.default_rng(seed)
    lo = np.array([r[0] for r in lo_hi])
    hi = np.array([r[1] for r in lo_hi])
    a = rng.uniform(size=(n_samples, k)) * (hi - lo) + lo
    b = rng.uniform(size=(n_samples, k)) * (hi - lo) + lo

    f_a = np.asarray(model(a), dtype=float).reshape(-1)
    f_b = np.asarray(model(b), dtype=float).reshape(-1)
    if f_a.shape[0] != n_samples or f_b.shape[0] != n_samples:
        raise ValueError("model must return one output per input row")
    variance = float(np.var(np.concatenate([f_a, f_b])))
    if variance == 0.0:
        raise ValueError("model output has zero variance; indices undefined")

    indices = {}
    for i in range(k):
        mixed = a.copy()
        mixed[:, i] = b[:, i]
        f_mixed = np.asarray(model(mixed), dtype=float).reshape(-1)
        partial = float(np.mean(f_b * (f_mixed - f_a)))
        indices[names[i]] = partial / variance
    return SobolReport(
        first_order=indices, n_samples=n_samples, seed=seed, output_variance=variance
    )
