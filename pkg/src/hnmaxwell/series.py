"""Truncated formal power series: the coefficient engine behind the
quadrature-weight generating functions.

A series is a plain coefficient vector c[0..N]; arithmetic never changes the
truncation order and mixing orders is an error.  Fractional powers use the
J.C.P. Miller recurrence, which only needs a positive constant term.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["TruncatedSeries", "binom_series", "series_mul", "series_pow"]


@dataclass(frozen=True)
class TruncatedSeries:
    """Coefficients c[0..N] of a formal power series truncated at order N."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        if c.ndim != 1 or c.size < 1:
            raise ValueError("coefficient vector must be 1-d with length >= 1")
        object.__setattr__(self, "coeffs", c)

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    def add_scalar(self, x: float) -> "TruncatedSeries":
        c = self.coeffs.copy()
        c[0] += x
        return TruncatedSeries(c)

    def scale(self, x: float) -> "TruncatedSeries":
        return TruncatedSeries(x * self.coeffs)


def binom_series(exponent: float, scale: float, n: int) -> TruncatedSeries:
    """Expansion of (1 - scale*z)^exponent to order n.

    c0 = 1 and c_j = c_{j-1} * scale * (j - 1 - exponent) / j.
    """
    if n < 0:
        raise ValueError("truncation order must be >= 0")
    j = np.arange(1, n + 1, dtype=float)
    factors = scale * (j - 1.0 - exponent) / j
    return TruncatedSeries(np.concatenate(([1.0], np.cumprod(factors))))


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product truncated at the common order."""
    if a.order != b.order:
        raise ValueError(f"truncation orders differ: {a.order} != {b.order}")
    return TruncatedSeries(np.convolve(a.coeffs, b.coeffs)[: a.order + 1])


def series_pow(f: TruncatedSeries, gamma: float) -> TruncatedSeries:
    """Raise a series with positive constant term to a real power.

    Miller recurrence: h0 = f0^gamma and, for n >= 1,

        h_n = (1 / (n*f0)) * sum_{k=1..n} ((gamma + 1)*k - n) * f_k * h_{n-k}.
    """
    f0 = f.coeffs[0]
    if f0 <= 0.0:
        raise ValueError(f"constant term must be positive for real powers, got {f0}")
    n_max = f.order
    h = np.empty(n_max + 1)
    h[0] = f0**gamma
    k = np.arange(1, n_max + 1, dtype=float)
    fk_times_k = f.coeffs[1:] * k  # f_k * k, reused across n
    for n in range(1, n_max + 1):
        # sum_k ((gamma+1)*k - n) f_k h_{n-k}  =  (gamma+1)*sum k f_k h_{n-k} - n*sum f_k h_{n-k}
        tail = h[:n][::-1]  # h_{n-1}, ..., h_0
        s = (gamma + 1.0) * np.dot(fk_times_k[:n], tail) - n * np.dot(f.coeffs[1 : n + 1], tail)
        h[n] = s / (n * f0)
    return TruncatedSeries(h)
