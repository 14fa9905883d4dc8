"""Streaming sufficient statistics of a [0,1]-valued sample sequence."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["RunningMoments", "SampleStore"]


@dataclass
class RunningMoments:
    """Single-pass mean / centered-sum-of-squares / extremes tracker.

    ``css`` is the centered second moment V_t = sum_i (x_i - mean_t)^2,
    maintained with the one-pass recurrence
    V_t = V_{t-1} + (x - mean_{t-1}) (x - mean_t), which avoids the
    catastrophic cancellation of sum(x^2) - t * mean^2 at t ~ 1e5.

    ``ones`` counts exact 1.0 samples and is meaningful only while
    ``is_binary`` holds; the flag clears permanently on the first sample
    outside {0, 1}.
    """

    t: int = 0
    mean: float = 0.0
    css: float = 0.0
    x_min: float = math.inf
    x_max: float = -math.inf
    ones: int = 0
    is_binary: bool = True

    def push(self, x: float) -> None:
        if math.isnan(x) or not (0.0 <= x <= 1.0):
            raise ValueError(f"samples must lie in [0, 1], got {x!r}")
        self.t += 1
        delta = x - self.mean
        self.mean += delta / self.t
        if self.mean < 0.0:
            self.mean = 0.0
        elif self.mean > 1.0:
            self.mean = 1.0
        self.css += delta * (x - self.mean)
        if self.css < 0.0:
            self.css = 0.0
        if x < self.x_min:
            self.x_min = x
        if x > self.x_max:
            self.x_max = x
        if self.is_binary:
            if x == 1.0:
                self.ones += 1
            elif x != 0.0:
                self.is_binary = False
                self.ones = 0

    def centered_css(self, m: float) -> float:
        """sum_i (x_i - m)^2 via the shift identity css + t (mean - m)^2."""
        if self.t < 1:
            raise ValueError("centered_css requires at least one sample")
        d = self.mean - m
        return self.css + self.t * d * d

    @property
    def vbar(self) -> float:
        """css / t, the per-sample centered second moment."""
        return self.css / self.t if self.t else 0.0


class SampleStore:
    """Ordered sample buffer plus running moments.

    Wealth evaluation needs the raw samples only for non-binary data; for
    binary streams the (ones, zeros) counts make every evaluation O(1).
    """

    __slots__ = ("moments", "_buf", "_n_zero", "_n_one")

    def __init__(self) -> None:
        self.moments = RunningMoments()
        self._buf = np.empty(128, dtype=np.float64)
        self._n_zero = 0
        self._n_one = 0

    def push(self, x: float) -> None:
        self.moments.push(x)  # validates the range
        t = self.moments.t
        if t > self._buf.shape[0]:
            grown = np.empty(2 * self._buf.shape[0], dtype=np.float64)
            grown[: t - 1] = self._buf[: t - 1]
            self._buf = grown
        self._buf[t - 1] = x
        if x == 0.0:
            self._n_zero += 1
        elif x == 1.0:
            self._n_one += 1

    @property
    def t(self) -> int:
        return self.moments.t

    @property
    def values(self) -> np.ndarray:
        """View of the samples pushed so far (do not mutate)."""
        return self._buf[: self.moments.t]

    @property
    def is_binary(self) -> bool:
        return self.moments.is_binary

    @property
    def ones(self) -> int:
        return self.moments.ones

    @property
    def n_positive(self) -> int:
        """Count of samples strictly above 0."""
        return self.moments.t - self._n_zero

    @property
    def n_at_one(self) -> int:
        """Count of samples exactly equal to 1."""
        return self._n_one
