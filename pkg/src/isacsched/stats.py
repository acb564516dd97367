"""Empirical distributions of Monte Carlo samples."""

from __future__ import annotations

import numpy as np


class EmpiricalDistribution:
    """Sorted sample set with CDF, quantile and reliability queries."""

    def __init__(self, samples):
        x = np.sort(np.asarray(samples, dtype=float).ravel())
        if x.size == 0:
            raise ValueError("empty sample set")
        if np.any(np.isnan(x)):
            raise ValueError("samples contain NaN")
        self.samples = x

    def __len__(self) -> int:
        return self.samples.size

    def cdf(self, x):
        """Fraction of samples <= x."""
        out = np.searchsorted(self.samples, x, side="right") / self.samples.size
        return float(out) if np.ndim(out) == 0 else out

    def quantile(self, q):
        """Smallest sample whose CDF reaches ``q`` (inverse of :meth:`cdf`)."""
        q = np.asarray(q, dtype=float)
        if np.any((q < 0) | (q > 1)):
            raise ValueError("quantile level must lie in [0, 1]")
        idx = np.clip(np.ceil(q * self.samples.size).astype(int) - 1, 0, self.samples.size - 1)
        out = self.samples[idx]
        return float(out) if out.ndim == 0 else out

    def mean(self) -> float:
        return float(np.mean(self.samples))

    def reliability(self, threshold: float) -> float:
        """Fraction of samples at or above ``threshold``."""
        below = np.searchsorted(self.samples, threshold, side="left")
        return 1.0 - below / self.samples.size

    def curve(self):
        """Distinct sample values and the CDF at each of them."""
        values, counts = np.unique(self.samples, return_counts=True)
        return values, np.cumsum(counts) / self.samples.size
